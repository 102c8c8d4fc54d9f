from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import divisor_sigma

from modp_companion.errors import CharacteristicMismatch, DomainMismatch, NotPIntegral
from modp_companion.ffield import make_field
from modp_companion.qseries import (
    QQ,
    IntegersMod,
    QExpansion,
    Verdict,
    algebra_mul,
    compare,
    conv_mod,
    gamma1_index,
    op_B,
    op_theta,
    op_U,
    op_V,
    sturm_bound,
)


def series(F, prec):
    return st.lists(st.integers(0, F.p - 1), min_size=prec * F.k, max_size=prec * F.k).map(
        lambda c: QExpansion.from_array(np.array(c).reshape(prec, F.k), F))


def eisenstein_oracle(k, prec):
    from sympy import bernoulli
    c = Fraction(-2 * k) / Fraction(str(bernoulli(k)))
    return QExpansion([1] + [c * int(divisor_sigma(n, k - 1)) for n in range(1, prec)], prec)


def test_product_truncation():
    f = QExpansion([1, 1], 3)
    g = QExpansion([1, -1], 3)
    assert (f * g).coefficients() == [1, 0, -1]
    assert (QExpansion([1, 2, 3, 4, 5], 5) * QExpansion([1, 1, 1], 3)).prec == 3


def test_e4_squared_is_e8():
    e4, e8 = eisenstein_oracle(4, 10), eisenstein_oracle(8, 10)
    assert e4.coefficients()[:3] == [1, 240, 2160]
    assert compare(e4 * e4, e8).verdict is Verdict.EQUAL


def test_domain_mismatch():
    F5, F7 = make_field(5), make_field(7)
    with pytest.raises(DomainMismatch):
        QExpansion([1], 1, F5) + QExpansion([1], 1, F7)


def test_reduction_rejects_p_denominators():
    f = QExpansion([Fraction(1, 5), 1], 2)
    with pytest.raises(NotPIntegral):
        f.change_domain(make_field(5))
    assert f.change_domain(make_field(7)).coefficients() == [make_field(7)(3), make_field(7)(1)]


def test_U_examples():
    f = QExpansion([1, 1, 3, 1, 5], 5)
    out = op_U(2, f)
    assert out.coefficients() == [1, 3, 5] and out.prec == 3
    g = QExpansion([7, 1, 2, 0, 4, 5, 0, 1], 8)
    assert op_U(3, g).support() == [0]


def test_V_examples():
    F5 = make_field(5)
    out = op_V(QExpansion([2, 3], 2, F5), 5)
    assert out.prec == 6 and out.support() == [0, 5]
    assert out[0] == F5(2) and out[5] == F5(3)
    F9 = make_field(3, 2)
    c = F9.gen
    out = op_V(QExpansion.from_array(np.array([[0, 0], c.coeffs]), F9), 3)
    assert out[3] == c ** 3 and out[3] != c
    assert op_V(QExpansion.from_array(np.array([[0, 0], c.coeffs]), F9), 3, linear=True)[3] == c


def test_V_needs_characteristic_p():
    with pytest.raises(CharacteristicMismatch):
        op_V(QExpansion([1, 1], 2, make_field(7)), 5)
    with pytest.raises(CharacteristicMismatch):
        op_V(QExpansion([1, 1], 2), 5)


def test_theta_example():
    assert op_theta(QExpansion([0, 1, 3], 3)).coefficients() == [0, 1, 6]


def test_sturm_bound_values():
    assert sturm_bound(12, 1) == 1
    assert gamma1_index(23) == 528
    assert sturm_bound(5, 23) == 220
    assert sturm_bound(1, 1) == 1


def test_comparison_is_three_valued():
    F = make_field(7)
    f = QExpansion([1, 2, 3], 3, F)
    g = QExpansion([1, 2, 4, 5], 4, F)
    assert compare(f, g).verdict is Verdict.UNEQUAL and compare(f, g).first_difference == 2
    assert compare(f, g, 2).verdict is Verdict.EQUAL
    assert compare(f, g, 4).verdict is Verdict.INSUFFICIENT
    with pytest.raises(TypeError):
        bool(compare(f, g))


def test_text_and_json_round_trip():
    F = make_field(5, 2)
    f = QExpansion.from_array(np.array([[1, 0], [0, 0], [3, 4], [0, 2]]), F)
    assert QExpansion.from_text(f.to_text(), F) == f
    assert QExpansion.from_json(f.to_json()) == f
    g = QExpansion([Fraction(1, 2), 0, -3], 3)
    assert QExpansion.from_text(g.to_text()) == g


def test_fast_products_match_schoolbook():
    rng = np.random.default_rng(1)
    for n, m in ((50, 7), (700, 13), (1500, 5**3)):
        a, b = rng.integers(0, m, n), rng.integers(0, m, n)
        ref = np.convolve(a.astype(object), b.astype(object))[:n] % m
        assert (conv_mod(a, b, m, n) == ref.astype(np.int64)).all()


def test_algebra_mul_in_cyclotomic_quotient():
    # (Z/7)[x]/(x^2+x+1): x * x = -1 - x
    a = np.zeros((3, 2), dtype=np.int64)
    a[0] = [0, 1]
    out = algebra_mul(a, a, 7, (1, 1, 1), 3)
    assert list(out[0]) == [6, 6]


FIELD_CASES = [make_field(5), make_field(7), make_field(5, 2), make_field(3, 2)]


@pytest.mark.parametrize("F", FIELD_CASES, ids=repr)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_ring_axioms_up_to_precision(F, data):
    f, g, h = (data.draw(series(F, 12)) for _ in range(3))
    assert (f * g) * h == f * (g * h)
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h


@pytest.mark.parametrize("F", FIELD_CASES, ids=repr)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_U_inverts_V(F, data):
    f = data.draw(series(F, 15))
    v = op_V(f, F.p)
    # with coefficients raised to the p-th power, U undoes V up to Frobenius
    assert op_U(F.p, v) == (f if F.k == 1 else f.frobenius())
    assert op_U(F.p, op_V(f, F.p, linear=True)) == f
    assert all(n % F.p == 0 for n in v.support())
    assert op_theta(v).is_zero()
    assert v.prec == F.p * (f.prec - 1) + 1


@pytest.mark.parametrize("F", FIELD_CASES, ids=repr)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_V_multiplicative_and_theta_leibniz(F, data):
    f, g = data.draw(series(F, 10)), data.draw(series(F, 10))
    assert op_V(f * g, F.p) == op_V(f, F.p) * op_V(g, F.p)
    assert op_theta(f * g) == op_theta(f) * g + f * op_theta(g)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=1, max_size=20), st.integers(2, 5))
def test_precision_never_increases(coeffs, ell):
    f = QExpansion(coeffs, len(coeffs))
    assert op_U(ell, f).prec <= (f.prec - 1) // ell + 1
    assert op_B(ell, f).prec == ell * (f.prec - 1) + 1
    assert (f * f).prec == f.prec
    assert op_theta(f).prec == f.prec


def test_integers_mod_domain():
    R = IntegersMod(5, 2)
    f = QExpansion([24, 1], 2, R)
    assert (f * f)[0] == 24 * 24 % 25
    assert f.change_domain(make_field(5))[0] == make_field(5)(4)
    assert QExpansion([1, 2], 2, QQ).domain is QQ
