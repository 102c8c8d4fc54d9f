import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modp_companion.companion import (
    CheckResult,
    CompanionCertificate,
    build_f_g,
    classical_f_g,
    compare_to_target,
    deplete,
    extract_weight_one,
    gamma_product,
    verify_lemma,
    verify_v_identity,
)
from modp_companion.data import eta23
from modp_companion.eigensystems import (
    UNIT_IDEAL,
    CompanionFamily,
    classical_monoid,
    companion_family,
    random_system,
    synthetic_family,
)
from modp_companion.errors import (
    CharacteristicMismatch,
    IncompleteFamily,
    PrecisionTooLow,
    UncertifiedInput,
    WeightMismatch,
)
from modp_companion.ffield import make_field
from modp_companion.qseries import QQ, QExpansion, op_U
from modp_companion.spaces import ModForm, hasse_invariant

F7 = make_field(7)


def test_gamma_product_examples():
    assert gamma_product(set(), {"v1": (F7(2), F7(3))}) == F7(3)
    g = {"v1": (F7(2), F7(3)), "v2": (F7(1), F7(4))}
    assert gamma_product({"v1"}, g) == F7(1)
    assert gamma_product({"v1", "v2"}, g) == F7(2)
    assert gamma_product(set(), g) == F7(12)


def test_build_f_g_at_the_unit_ideal():
    fam = synthetic_family(1, 7, seed=5)
    f, g = build_f_g(fam)
    a, b = fam.gammas["v1"]
    assert g.coeff(UNIT_IDEAL).is_zero()
    # f = f_empty * gamma_empty - f_{v1} * gamma_{v1} = beta - alpha in the subset convention
    assert f.coeff(UNIT_IDEAL) == b - a and not f.coeff(UNIT_IDEAL).is_zero()


def test_g_vanishes_away_from_S():
    fam = synthetic_family(2, 7, seed=9)
    f, g = build_f_g(fam)
    table = fam.monoid.ideals_up_to(3000)
    coprime = ~table.exps[:, fam.monoid.S_mask].any(axis=1)
    vals = g.coefficients(table.exps[coprime])
    assert not vals.any()


def test_build_f_g_from_a_plain_list():
    fam = synthetic_family(2, 5, seed=1)
    f1, g1 = build_f_g(fam)
    f2, g2 = build_f_g(list(fam))
    table = fam.monoid.ideals_up_to(500)
    assert (f1.coefficients(table.exps) == f2.coefficients(table.exps)).all()
    assert (g1.coefficients(table.exps) == g2.coefficients(table.exps)).all()
    with pytest.raises(IncompleteFamily):
        build_f_g(list(fam)[:3])


def test_classical_combination_example():
    # common a_l = 1, alpha = 2, beta = 3 mod 7: f(l) = 2 - 3 = 6
    f1 = QExpansion([0, 1, 1], 3, F7)
    f2 = QExpansion([0, 1, 1], 3, F7)
    f, g = classical_f_g(f1, f2, 2, 3)
    assert f[2] == F7(6) and g[2] == F7(0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lemma_passes_on_synthetic_families(n):
    fam = synthetic_family(n, 5, seed=100 + n)
    cert = verify_lemma(*build_f_g(fam), norm_bound=5000)
    assert cert.lemma_passed
    assert cert.lemma_part1.counterexample is None and cert.lemma_part2.counterexample is None


def _corrupt(fam, member, label):
    systems = list(fam.systems)
    s = systems[member]
    systems[member] = s.with_eigenvalues({label: s.eigenvalue(label) + 1})
    return CompanionFamily(fam.monoid, fam.gammas, fam.subsets, systems, fam.shared)


def test_corrupted_family_fails_part_one_with_a_counterexample():
    fam = synthetic_family(2, 5, seed=4)
    bad = _corrupt(fam, 1, "l2.1")
    cert = verify_lemma(*build_f_g(bad), norm_bound=5000)
    assert not cert.lemma_part1.passed
    cex = cert.lemma_part1.counterexample
    assert cex["norm"] == 2 and "l2.1" in cex["ideal"]
    assert cert.failed and not cert.fully_passing


def test_corrupted_gamma_is_structural():
    fam = synthetic_family(1, 7, seed=2)
    systems = list(fam.systems)
    systems[0] = systems[0].with_eigenvalues({"v1": fam.gammas["v1"][0] + 1})
    broken = CompanionFamily(fam.monoid, fam.gammas, fam.subsets, systems)
    with pytest.raises(IncompleteFamily):
        build_f_g(broken)


def classical_pair(p, alpha, beta, prec, seed=0, field=None):
    """Two abstract eigensystems over Q sharing every prime-to-p eigenvalue,
    with U_p-eigenvalues alpha and beta, as q-expansions."""
    F = field or make_field(p)
    M = classical_monoid(p, prec)
    shared = random_system(M, F, np.random.default_rng(seed), weight=p)
    fam = companion_family(shared, {str(p): (alpha, beta)})
    return fam[{str(p)}].q_expansion(prec), fam[set()].q_expansion(prec), fam


def test_classical_model_v_identity_mod_7():
    f1, f2, _ = classical_pair(7, 2, 3, 400)
    f, g = classical_f_g(f1, f2, 2, 3)
    assert all(n % 7 == 0 for n in g.support())
    for n in range(1, 400 // 7):
        assert g[7 * n] == f[n]
    cert = verify_v_identity(f, g, 7)
    assert cert.v_identity.passed
    assert verify_v_identity(f, g, 7, frobenius_twist=True).v_identity.passed
    cert = verify_lemma(f, g, p=7)
    assert cert.lemma_passed


def test_v_identity_trivial_examples():
    z = QExpansion([0] * 50, 50, F7)
    assert verify_v_identity(z, z, 7).v_identity.passed
    g = QExpansion([0] * 10 + [3] + [0] * 39, 50, F7)
    cert = verify_v_identity(z, g, 7)
    assert not cert.v_identity.passed and cert.v_identity.counterexample["index"] == 10
    with pytest.raises(CharacteristicMismatch):
        verify_v_identity(QExpansion([0, 1], 2, make_field(5)), z, 7)


def test_conjugate_eigenvalues_linear_versus_twisted():
    # alpha, beta conjugate in F_49: the linear identity holds, the p-power one does not
    F = make_field(7, 2)
    alpha = F.gen
    beta = alpha.frobenius()
    f1, f2, _ = classical_pair(7, alpha, beta, 300, field=F)
    f, g = classical_f_g(f1, f2, alpha, beta)
    assert verify_v_identity(f, g, 7).v_identity.passed
    twisted = verify_v_identity(f, g, 7, frobenius_twist=True).v_identity
    assert not twisted.passed and twisted.counterexample["index"] == 7


def test_formal_v_identity_over_extension_field():
    fam = synthetic_family(2, 5, seed=8, field_degree=2)
    f, g = build_f_g(fam)
    assert verify_v_identity(f, g, 5, norm_bound=2000).v_identity.passed


def _certified(p=7, prec=300):
    f1, f2, _ = classical_pair(p, 2, 3, prec)
    f, g = classical_f_g(f1, f2, 2, 3)
    cert = verify_lemma(f, g, p=p).merge(verify_v_identity(f, g, p))
    return ModForm(f, p, 1), cert


def test_extract_weight_one():
    fbar, cert = _certified()
    h = extract_weight_one(fbar, 7, cert)
    assert h.weight == 1 and h.expansion == fbar.expansion and h.level == fbar.level
    assert (cert.hasse_division.k_in, cert.hasse_division.k_out) == (7, 1)
    assert (hasse_invariant(7, fbar.prec).expansion * h.expansion) == fbar.expansion
    with pytest.raises(WeightMismatch):
        extract_weight_one(ModForm(fbar.expansion, 5, 1), 7, cert)
    with pytest.raises(UncertifiedInput):
        extract_weight_one(fbar, 7, CompanionCertificate(7))
    with pytest.raises(UncertifiedInput):
        extract_weight_one(fbar, 5, cert)


def test_failing_certificate_is_not_accepted():
    f1, f2, _ = classical_pair(7, 2, 3, 200)
    f, g = classical_f_g(f1, f2, 2, 4)          # wrong beta
    cert = verify_lemma(f, g, p=7).merge(verify_v_identity(f, g, 7))
    assert cert.failed
    with pytest.raises(UncertifiedInput):
        extract_weight_one(ModForm(f, 7, 1), 7, cert)


def test_zero_candidate_is_flagged():
    f1, _, _ = classical_pair(7, 2, 3, 200)
    f, g = classical_f_g(f1, f1, 2, 2)
    cert = verify_lemma(f, g, p=7).merge(verify_v_identity(f, g, 7))
    assert cert.zero_candidate and not cert.fully_passing
    assert any("ZeroCandidate" in n for n in cert.notes)
    with pytest.raises(UncertifiedInput):
        extract_weight_one(ModForm(f, 7, 1), 7, cert)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([5, 7, 11]), st.data())
def test_hasse_division_is_identity_on_series(p, data):
    coeffs = data.draw(st.lists(st.integers(0, p - 1), min_size=30, max_size=30))
    f = QExpansion(coeffs, 30, make_field(p))
    h = hasse_invariant(p, 30).expansion
    cert = CompanionCertificate(p)
    cert.lemma_part1 = cert.lemma_part2 = cert.v_identity = CheckResult(True, 30)
    prod = ModForm(h * f, p, 1)
    if not f.is_zero():
        assert extract_weight_one(prod, p, cert).expansion == f


def test_compare_to_target():
    p = 5
    F = make_field(p)
    t = eta23(400)
    target = ModForm(t.expansion.change_domain(F), 1, 23, t.character)
    m = compare_to_target(target, target, p)
    assert m.passed and m.sturm_bound == 220
    arr = np.array(target.expansion.array, copy=True).reshape(400, -1)
    arr[300] = (arr[300] + 1) % p
    beyond = ModForm(QExpansion.from_array(arr, F), 1, 23, t.character)
    m = compare_to_target(beyond, target, p)
    assert m.passed and m.sturm_bound == 220     # differences past the bound are invisible
    arr[100] = (arr[100] + 1) % p
    early = ModForm(QExpansion.from_array(arr, F), 1, 23, t.character)
    m = compare_to_target(early, target, p)
    assert not m.passed and m.first_mismatch == 100
    short = ModForm(target.expansion.truncate(150), 1, 23, t.character)
    with pytest.raises(PrecisionTooLow):
        compare_to_target(short, target, p)


def test_deplete_examples():
    f = QExpansion([1, 1, 1, 1, 1], 5, QQ)
    d = deplete(f, 2)
    # a_0 is struck as well (2 | 0)
    assert d.coefficients() == [0, 1, 0, 1, 0]
    m = ModForm(QExpansion(list(range(20)), 20, F7), 3, 5)
    dm = deplete(m, 3)
    assert dm.level == 45 and dm.weight == 3
    assert op_U(3, dm.expansion).is_zero()
    assert deplete(dm, 3).expansion == dm.expansion


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=40), st.sampled_from([2, 3, 5, 11]))
def test_deplete_properties(coeffs, ell):
    f = QExpansion(coeffs, len(coeffs), F7)
    d = deplete(f, ell)
    assert op_U(ell, d).is_zero()
    assert deplete(d, ell) == d
    assert all(d[n] == f[n] for n in range(len(coeffs)) if n % ell)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_certificate_is_monotone_in_precision(n):
    for seed in range(3):
        fam = synthetic_family(n, 7, seed=seed)
        f, g = build_f_g(fam)
        lo = verify_lemma(f, g, norm_bound=1000)
        hi = verify_lemma(f, g, norm_bound=4000)
        assert lo.lemma_passed and hi.lemma_passed
        assert lo.lemma_part2.checked < hi.lemma_part2.checked


def test_certificate_json_round_trip():
    fam = synthetic_family(2, 5, seed=3)
    f, g = build_f_g(fam)
    cert = verify_lemma(f, g, norm_bound=500).merge(verify_v_identity(f, g, 5, norm_bound=500))
    d = cert.to_json()
    assert d["schema"] == 1 and d["fully_passing"]
    assert CompanionCertificate.from_json(d).to_json() == d
    with pytest.raises(ValueError):
        CompanionCertificate.from_json({**d, "schema": 2})
