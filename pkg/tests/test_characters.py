import math
from collections import Counter
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from modp_companion.characters import (
    DirichletChar,
    bernoulli_number,
    char_group,
    embed_char,
    gen_bernoulli,
    kronecker_character,
)
from modp_companion.errors import NoEmbedding
from modp_companion.ffield import make_field


def bernoulli_by_generating_function(k, D):
    """B_{k,chi} for chi = (D/.) from  sum_a chi(a) t e^{at} / (e^{ft} - 1)."""
    t = sympy.symbols("t")
    f = abs(D)
    expr = sum(_kron(D, a) * t * sympy.exp(a * t) for a in range(1, f + 1)) / (sympy.exp(f * t) - 1)
    ser = sympy.series(expr, t, 0, k + 1).removeO()
    return Fraction(str(ser.coeff(t, k) * sympy.factorial(k)))


def _kron(D, a):
    return int(sympy.functions.combinatorial.numbers.kronecker_symbol(D, a))


def test_char_group_sizes():
    assert char_group(1) == [DirichletChar.trivial(1)]
    G5 = char_group(5)
    assert len(G5) == 4 and sorted(c.order for c in G5) == [1, 2, 4, 4]
    G8 = char_group(8)
    assert len(G8) == 4 and all(c.order <= 2 for c in G8)


@pytest.mark.parametrize("N", range(1, 25))
def test_group_size_and_multiplicativity(N):
    G = char_group(N)
    assert len(G) == sympy.totient(N)
    units = [a for a in range(N) if math.gcd(a, N) == 1]
    for chi in G[:6]:
        for a in units:
            for b in units[:5]:
                assert chi.exponent(a * b) == (chi.exponent(a) + chi.exponent(b)) % chi.group_exponent
        for a in range(N):
            assert (chi.exponent(a) is None) == (math.gcd(a, N) > 1)
        assert chi.parity == (1 if chi.exponent(-1) == 0 else -1)


@pytest.mark.parametrize("N", range(2, 25))
def test_orthogonality(N):
    # sum_chi chi(a) vanishes unless a = 1: the values chi(a) are equidistributed
    # over a nontrivial subgroup of mu_M, which sums to zero exactly.
    G = char_group(N)
    M = G[0].group_exponent
    for a in range(N):
        if math.gcd(a, N) != 1:
            continue
        counts = Counter(chi.exponent(a) for chi in G)
        if a % N == 1 % N:
            assert counts == Counter({0: len(G)})
        else:
            values = sorted(counts)
            step = values[1] - values[0]
            assert len(values) > 1 and values == list(range(0, M, step))
            assert len(set(counts.values())) == 1


def test_bernoulli_examples():
    assert gen_bernoulli(2, DirichletChar.trivial(1)) == Fraction(1, 6)
    assert gen_bernoulli(1, kronecker_character(-4)) == Fraction(-1, 2)
    assert gen_bernoulli(1, DirichletChar.trivial(1)) == Fraction(-1, 2)
    assert bernoulli_number(12) == Fraction(-691, 2730)


@pytest.mark.parametrize("D", [-3, -4, 5, -7, 8, -8, 12])
def test_bernoulli_against_generating_function(D):
    chi = kronecker_character(D)
    for k in range(1, 5):
        assert gen_bernoulli(k, chi) == bernoulli_by_generating_function(k, D)


@pytest.mark.parametrize("N", range(1, 13))
def test_bernoulli_parity_vanishing(N):
    for chi in char_group(N):
        for k in range(1, 13):
            if chi.parity != (-1) ** k and not (k == 1 and chi.is_trivial()):
                val = gen_bernoulli(k, chi)
                assert (val == 0) if isinstance(val, Fraction) else val.is_rational() and val.rational() == 0


def test_embed_char_examples():
    F = make_field(7)
    assert set(embed_char(DirichletChar.trivial(6), F).values()) == {F.one}
    chi4 = kronecker_character(-4)
    vals = embed_char(chi4, make_field(5))
    assert vals[1] == make_field(5)(1) and vals[3] == make_field(5)(4)
    quartic = next(c for c in char_group(5) if c.order == 4)
    with pytest.raises(NoEmbedding):
        embed_char(quartic, make_field(7))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([5, 7, 11, 13, 16, 21]), st.data())
def test_embedding_is_multiplicative(N, data):
    chi = data.draw(st.sampled_from(char_group(N)))
    p = next(q for q in sympy.primerange(5, 200) if (q - 1) % chi.order == 0 and N % q)
    vals = embed_char(chi, make_field(p))
    units = sorted(vals)
    a, b = data.draw(st.sampled_from(units)), data.draw(st.sampled_from(units))
    assert vals[a * b % N] == vals[a] * vals[b]


def test_character_json_round_trip():
    for chi in char_group(15):
        assert DirichletChar.from_json(chi.to_json()) == chi


def test_kronecker_matches_sympy():
    chi = kronecker_character(-23)
    for a in range(1, 23):
        assert (chi.exponent(a) == 0) == (_kron(-23, a) == 1)
    assert chi.parity == -1
