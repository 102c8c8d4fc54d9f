from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from modp_companion.characters import DirichletChar, char_group, kronecker_character
from modp_companion.data import delta
from modp_companion.errors import (
    NotComputable,
    NotNormalizable,
    ParityMismatch,
    PrecisionTooLow,
    UnsupportedCharacteristic,
)
from modp_companion.ffield import make_field
from modp_companion.qseries import QExpansion, sturm_bound
from modp_companion.spaces import (
    ModForm,
    dimension,
    eigen_decomposition,
    eigenforms,
    eisenstein,
    hasse_invariant,
    hecke_matrix,
    multiplicativity_failure,
    space_basis,
)

ONE = DirichletChar.trivial(1)


def level_one_eisenstein(k, prec, p):
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n reduced mod p, from sympy."""
    c = Fraction(-2 * k) / Fraction(str(sympy.bernoulli(k)))
    coeffs = [1] + [c * int(sympy.divisor_sigma(n, k - 1)) for n in range(1, prec)]
    return QExpansion(coeffs, prec).change_domain(make_field(p))


def test_eisenstein_examples():
    e4 = eisenstein(4, ONE, ONE, 3)
    assert e4.expansion.coefficients() == [1, 240, 2160]
    chi4 = kronecker_character(-4)
    e1 = eisenstein(1, ONE, chi4, 4)
    assert e1.expansion.coefficients() == [Fraction(1, 4), 1, 1, 0]
    assert e1.level == 4
    with pytest.raises(ParityMismatch):
        eisenstein(1, ONE, ONE, 4)


def test_eisenstein_divisor_sums_with_characters():
    chi3 = kronecker_character(-3)
    e = eisenstein(3, chi3, ONE, 30)
    for n in range(1, 30):
        want = sum(int(sympy.jacobi_symbol(n // d, 3)) * d ** 2 for d in sympy.divisors(n))
        assert e.expansion[n] == want


def test_hasse_invariant_is_one():
    for p in (5, 7, 11, 13):
        h = hasse_invariant(p, 60)
        assert h.weight == p - 1
        assert h.expansion.support() == [0]
    with pytest.raises(UnsupportedCharacteristic):
        hasse_invariant(3, 10)


def test_dimension_examples():
    assert dimension(12, 1) == 2
    assert dimension(2, 5) == 3
    with pytest.raises(NotComputable):
        dimension(1, 23)


@pytest.mark.parametrize("N", [1, 3, 4, 5, 7, 8, 11, 12])
def test_dimension_sectors_add_up(N):
    for k in range(2, 9):
        total = sum(dimension(k, N, chi) for chi in char_group(N))
        assert total == dimension(k, N)


def test_dimensions_against_known_values():
    # weight 2: g + c - 1 (X_1(11) has genus 1 and 10 cusps; X_1(13) genus 2, 12 cusps)
    assert dimension(2, 11) == 10
    assert dimension(2, 13) == 13
    assert dimension(4, 1) == 1 and dimension(6, 1) == 1 and dimension(14, 1) == 1
    assert dimension(24, 1) == 3
    assert dimension(2, 1) == 0


def test_level_one_weight_12_basis_mod_13():
    b = space_basis(12, 1, 13, prec=20)
    assert b.dimension == 2 and not b.spanning_incomplete
    assert list(b.pivots) == [0, 1]
    F = make_field(13)
    forms = b.forms
    e12 = level_one_eisenstein(12, 20, 13)
    d = delta(20).expansion.change_domain(F)
    # E_12 = 1 mod 13 already has a_1 = 0, so it is the first echelon row
    assert forms[0].expansion == e12
    assert forms[1].expansion == d


def test_weight_two_level_five():
    assert space_basis(2, 5, 7, prec=30).dimension == 3


def test_precision_too_low():
    with pytest.raises(PrecisionTooLow):
        space_basis(12, 1, 13, prec=1)
    b = space_basis(12, 1, 13, prec=sturm_bound(12, 1) + 1)
    with pytest.raises(PrecisionTooLow):
        hecke_matrix(2, b)


def test_hecke_on_level_one():
    b = space_basis(12, 1, 13, prec=40)
    T2 = hecke_matrix(2, b)
    # rows are E_12 and Delta: E_12 has eigenvalue 1 + 2^11, Delta has tau(2) = -24
    assert T2.tolist() == [[(1 + 2 ** 11) % 13, 0], [0, -24 % 13]]


@pytest.mark.parametrize("k,p", [(4, 5), (6, 7), (8, 11), (10, 13)])
def test_hecke_on_level_one_eisenstein(k, p):
    b = space_basis(k, 1, p, prec=40)
    assert b.dimension == 1
    for ell in (2, 3):
        assert hecke_matrix(ell, b).tolist() == [[(1 + ell ** (k - 1)) % p]]


def test_eigenforms_weight_12():
    b = space_basis(12, 1, 13, prec=40)
    with pytest.raises(NotNormalizable):
        eigenforms(b, [2])
    forms = eigenforms(b, [2], allow_unnormalized=True)
    a2 = sorted(int(f.eigenvalues[2]) for f in forms)
    assert a2 == [2, 8]
    norm = [f for f in forms if f.normalized]
    assert len(norm) == 1 and norm[0].expansion == delta(40).expansion.change_domain(make_field(13))


def test_one_dimensional_space_is_its_own_eigenform():
    b = space_basis(4, 1, 7, prec=30)
    (f,) = eigenforms(b, [2, 3])
    assert f[1] == make_field(7)(1)
    # E_4 / 240 mod 7
    assert f.expansion == level_one_eisenstein(4, 30, 7) * make_field(7)(240).inverse()


@pytest.mark.parametrize("k,N,p", [(2, 11, 5), (4, 5, 7), (3, 7, 5), (5, 23, 5), (6, 4, 5)])
def test_hecke_commute_and_eigenforms_multiplicative(k, N, p):
    prec = 3 * sturm_bound(k, N) + 10
    b = space_basis(k, N, p, prec=prec)
    T2, T3 = (hecke_matrix(l, b) if N % l else None for l in (2, 3))
    if T2 is not None and T3 is not None:
        assert ((T2 @ T3) % p == (T3 @ T2) % p).all()
    primes = [l for l in (2, 3) if N % l]
    dec = eigen_decomposition(b, primes, strict=False)
    for f in dec.forms:
        if f.normalized and f.character is not None:
            assert multiplicativity_failure(f) is None


def test_hasse_multiplication_is_identity_on_series():
    p = 7
    b = space_basis(6, 4, p, prec=40)
    h = hasse_invariant(p, 40).expansion
    for f in b.forms:
        assert (h * f.expansion) == f.expansion


def test_character_sector_basis():
    chi = kronecker_character(-23)
    b = space_basis(5, 23, 5, prec=5 * sturm_bound(5, 23) + 10, character=chi)
    assert b.dimension == dimension(5, 23, chi)
    forms = eigenforms(b, [2, 3, 5], strict=False)
    assert all(f.character == chi for f in forms)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_hecke_matrix_matches_coefficient_formula(seed, ell):
    # a_n(T_l f) = a_{nl} + chi(l) l^{k-1} a_{n/l} on a random combination of the chi_5-part
    k, N, p = 4, 5, 7
    chi = kronecker_character(5)
    b = space_basis(k, N, p, prec=3 * sturm_bound(k, N) + 10, character=chi)
    T = hecke_matrix(ell, b)
    v = np.random.default_rng(seed).integers(0, p, b.dimension)
    f = (v @ b.matrix) % p
    chi_l = int(sympy.jacobi_symbol(ell, 5))
    n_out = b.prec // ell
    want = np.array([(f[n * ell] + (chi_l * ell ** (k - 1) * f[n // ell] if n % ell == 0 else 0)) % p
                     for n in range(n_out)])
    got = ((v @ T) % p @ b.matrix) % p
    assert (got[:n_out] == want).all()


def test_modform_equality_needs_sturm_precision():
    F = make_field(5)
    f = ModForm(QExpansion([0, 1], 2, F), 4, 1)
    assert f == ModForm(QExpansion([0, 1], 2, F), 4, 1)   # Sturm bound 1 at level one
    g = ModForm(QExpansion([0, 1], 2, F), 12, 11)
    with pytest.raises(PrecisionTooLow):
        g == ModForm(QExpansion([0, 1], 2, F), 12, 11)   # noqa: B015
