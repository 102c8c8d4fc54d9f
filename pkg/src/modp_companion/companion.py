"""The companion construction and its certificate.

Given eigensystems f_I (I a subset of S) that share their eigenvalues away
from S and take the value gamma_{v,1} (v in I) or gamma_{v,2} (v not in I)
at each v in S, form

    f = sum_I (-1)^|I| gamma_I f_I,      g = sum_I (-1)^|I| f_I,

with gamma_I = prod_{v in I} gamma_{v,1} prod_{v not in I} gamma_{v,2}.
The checks below are the q-expansion consequences of the construction:

* part 1 of the lemma: b(n) = 0 whenever some v in S does not divide n;
* part 2: b(pm) = a(m) for every m, where a, b are the coefficients of f, g;
* the V-identity: g is supported on p-divisible indices and a_{pn}(g) = a_n(f);
* division by the Hasse invariant, whose q-expansion is 1, lowers the weight
  from p to 1 without changing the q-expansion.

Every check returns a section of a :class:`CompanionCertificate`; mathematical
failure is reported through the first counterexample in canonical order,
never by raising.
"""
from __future__ import annotations

import weakref
from dataclasses import asdict, dataclass, field as dc_field
from typing import Mapping, Sequence

import numpy as np
import sympy

from .eigensystems import CompanionFamily, EigenSystem, Ideal, IdealTable, subsets_of
from .errors import (
    CharacteristicMismatch,
    IncompleteFamily,
    NotDiagonalizable,
    PrecisionTooLow,
    UncertifiedInput,
    WeightMismatch,
)
from .ffield import FieldDescriptor, FqElem, coerce, common_field, embed, fq_embed_array, fq_frobenius, fq_mul, make_field
from .qseries import QQ, QExpansion, characteristic, sturm_bound

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# certificate
# ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    """Outcome of one check: pass/fail, how many indices were checked, first failure."""

    passed: bool
    checked: int
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {"passed": self.passed, "checked": self.checked, "counterexample": self.counterexample}

    @classmethod
    def from_json(cls, data: Mapping | None) -> "CheckResult | None":
        if data is None:
            return None
        return cls(bool(data["passed"]), int(data["checked"]), data.get("counterexample"))


@dataclass
class HasseDivision:
    k_in: int
    p: int
    k_out: int


@dataclass
class TargetMatch:
    passed: bool
    sturm_bound: int
    checked_prec: int
    first_mismatch: int | None = None


@dataclass
class CompanionCertificate:
    """Machine-checkable record of the lemma, the V-identity and Hasse division."""

    p: int
    lemma_part1: CheckResult | None = None
    lemma_part2: CheckResult | None = None
    v_identity: CheckResult | None = None
    hasse_division: HasseDivision | None = None
    target_match: TargetMatch | None = None
    checked_norm_bound: int | None = None
    checked_prec: int | None = None
    zero_candidate: bool = False
    notes: list[str] = dc_field(default_factory=list)

    def sections(self) -> dict[str, CheckResult]:
        return {name: getattr(self, name) for name in ("lemma_part1", "lemma_part2", "v_identity")
                if getattr(self, name) is not None}

    @property
    def lemma_passed(self) -> bool:
        return bool(self.lemma_part1 and self.lemma_part1.passed
                    and self.lemma_part2 and self.lemma_part2.passed)

    @property
    def v_identity_passed(self) -> bool:
        return bool(self.v_identity and self.v_identity.passed)

    @property
    def fully_passing(self) -> bool:
        """Lemma and V-identity present and passing, no zero candidate, target (if any) matched."""
        ok = self.lemma_passed and self.v_identity_passed and not self.zero_candidate
        if self.target_match is not None:
            ok = ok and self.target_match.passed
        return ok

    @property
    def failed(self) -> bool:
        """A check ran and found a counterexample (or the target did not match)."""
        bad = any(not s.passed for s in self.sections().values())
        return bad or (self.target_match is not None and not self.target_match.passed)

    def merge(self, other: "CompanionCertificate") -> "CompanionCertificate":
        if other.p != self.p:
            raise ValueError("certificates for different primes")
        for name in ("lemma_part1", "lemma_part2", "v_identity", "hasse_division", "target_match",
                     "checked_norm_bound", "checked_prec"):
            val = getattr(other, name)
            if val is not None:
                setattr(self, name, val)
        self.zero_candidate = self.zero_candidate or other.zero_candidate
        self.notes.extend(n for n in other.notes if n not in self.notes)
        return self

    def to_json(self) -> dict:
        def sec(x):
            return None if x is None else x.to_json()
        return {
            "schema": SCHEMA_VERSION,
            "p": self.p,
            "fully_passing": self.fully_passing,
            "lemma_part1": sec(self.lemma_part1),
            "lemma_part2": sec(self.lemma_part2),
            "v_identity": sec(self.v_identity),
            "hasse_division": None if self.hasse_division is None else asdict(self.hasse_division),
            "target_match": None if self.target_match is None else asdict(self.target_match),
            "checked_norm_bound": self.checked_norm_bound,
            "checked_prec": self.checked_prec,
            "zero_candidate": self.zero_candidate,
            "notes": list(self.notes),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CompanionCertificate":
        if data.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported certificate schema {data.get('schema')!r}")
        hd = data.get("hasse_division")
        tm = data.get("target_match")
        return cls(
            int(data["p"]),
            CheckResult.from_json(data.get("lemma_part1")),
            CheckResult.from_json(data.get("lemma_part2")),
            CheckResult.from_json(data.get("v_identity")),
            None if hd is None else HasseDivision(**hd),
            None if tm is None else TargetMatch(**tm),
            data.get("checked_norm_bound"),
            data.get("checked_prec"),
            bool(data.get("zero_candidate", False)),
            list(data.get("notes", [])),
        )


ZERO_CANDIDATE_NOTE = ("ZeroCandidate: f vanishes to the checked precision; with equal "
                       "Frobenius eigenvalues the weight-one form produced this way is zero")


# ---------------------------------------------------------------------------
# gamma products and the combinations f, g
# ---------------------------------------------------------------------------

def gamma_product(I, gammas: Mapping[str, tuple]) -> FqElem:
    """gamma_I = prod_{v in I} gamma_{v,1} * prod_{v not in I} gamma_{v,2}."""
    I = frozenset(I)
    unknown = I - set(gammas)
    if unknown:
        raise KeyError(f"{sorted(unknown)[0]!r} is not in S")
    out = None
    for v in sorted(gammas):
        g1, g2 = gammas[v]
        x = g1 if v in I else g2
        out = x if out is None else out * x
    if out is None:
        raise ValueError("gammas must be given on a nonempty S")
    return out


def _agree_outside_S(a: EigenSystem, b: EigenSystem) -> bool:
    return a.monoid == b.monoid and a.outside_key == b.outside_key


class _Evaluation:
    """Coefficients of every member of a family on one set of ideals.

    c(m, f_I) = c_out(m) * c_S(m, f_I): the factor from primes outside S is
    shared by the whole family and is computed once.  ``shift`` selects the
    same data at the ideals p*m (which only changes the S-part).
    """

    def __init__(self, family: CompanionFamily, table):
        monoid = family.monoid
        self.family = family
        self.exps = table.exps
        self.field = F = family.systems[0].field
        cols, support = table.columns()
        self.inside_idx = [i for i, q in enumerate(monoid.primes) if q.in_S]
        self._S_cols = cols[self.inside_idx]
        ref = family.systems[0]

        def outside(sys_):
            out = np.zeros((len(self.exps), F.k), dtype=np.int64)
            out[:, 0] = 1
            for i, q in enumerate(monoid.primes):
                rows = support[i]
                if q.in_S or not rows.size:
                    continue
                r = cols[i][rows]
                out[rows] = fq_mul(F, out[rows], sys_.prime_power_table(i, int(r.max()))[r])
            return out

        if all(_agree_outside_S(ref, s) for s in family.systems):
            self.base = outside(ref)
            self._outside = None
        else:
            # members disagree away from S: no common factor, keep each member's own
            self.base = np.zeros((len(self.exps), F.k), dtype=np.int64)
            self.base[:, 0] = 1
            self._outside = [outside(s) for s in family.systems]
        self._inside: dict = {}
        self._comb: dict = {}

    def inside(self, shift: bool = False) -> list[np.ndarray]:
        """c_S(m, f_I) (or c_S(pm, f_I)) for every member, in family order."""
        if shift not in self._inside:
            F = self.field
            ex = self._S_cols + int(shift)
            top = [int(col.max()) if col.size else 0 for col in ex]
            gathered: dict = {}
            vals = []
            for sys_ in self.family.systems:
                out = None
                for t, (col, i, r) in enumerate(zip(ex, self.inside_idx, top)):
                    tab = sys_.prime_power_table(i, r)
                    key = (t, tab.tobytes())
                    if key not in gathered:
                        gathered[key] = tab[col]
                    out = gathered[key] if out is None else fq_mul(F, out, gathered[key])
                if self._outside is not None:
                    out = fq_mul(F, out, self._outside[len(vals)])
                vals.append(out)
            self._inside[shift] = vals
        return self._inside[shift]

    def members(self, shift: bool = False) -> list[np.ndarray]:
        F = self.field
        return [fq_mul(F, self.base, c) for c in self.inside(shift)]

    def combination(self, weights: Sequence[FqElem], shift: bool = False) -> np.ndarray:
        key = (tuple(w.index for w in weights), shift)
        if key not in self._comb:
            F = self.field
            inside = self.inside(shift)
            if F.k == 1:
                w = np.array([x.coeffs[0] for x in weights], dtype=np.int64)
                acc = np.einsum("i,inj->nj", w, np.stack(inside)) % F.p
            else:
                acc = np.zeros((len(self.exps), F.k), dtype=np.int64)
                for w, c in zip(weights, inside):
                    acc = (acc + fq_mul(F, c, np.array(w.coeffs, dtype=np.int64))) % F.p
            self._comb[key] = fq_mul(F, self.base, acc)
        return self._comb[key]


class FormalCombination:
    """sum_I w_I c(., f_I) over a companion family, evaluated on ideal tables."""

    def __init__(self, family: CompanionFamily, weights: Sequence[FqElem], name: str):
        self.family = family
        self.weights = list(weights)
        self.name = name
        self.field = family.systems[0].field

    @property
    def p(self) -> int:
        return self.family.monoid.p

    def coefficients(self, exps: np.ndarray, evaluation: _Evaluation | None = None,
                     shift: bool = False) -> np.ndarray:
        """Values at the ideals with exponent rows ``exps`` (at p*m when ``shift``)."""
        if evaluation is None:
            evaluation = _Evaluation(self.family, _adhoc_table(self.family, exps))
        return evaluation.combination(self.weights, shift)

    def coeff(self, m: Ideal) -> FqElem:
        v = self.family.monoid.vector(m)[None, :]
        return FqElem(self.field, self.coefficients(v)[0])

    def __repr__(self) -> str:
        return f"FormalCombination({self.name}, 2^{len(self.family.monoid.S)} terms)"


def family_coefficients(family: CompanionFamily, exps: np.ndarray) -> list[np.ndarray]:
    """c(m, f_I) for every member, sharing the product over primes outside S."""
    return _Evaluation(family, _adhoc_table(family, exps)).members()


def _adhoc_table(family: CompanionFamily, exps) -> IdealTable:
    exps = np.atleast_2d(np.asarray(exps, dtype=np.int64))
    return IdealTable(family.monoid, exps, np.ones(len(exps), dtype=np.int64))


def _check_family(family: CompanionFamily):
    """Structural completeness only.  Members that disagree at primes outside S
    are left to the lemma check, which reports them as a counterexample."""
    monoid = family.monoid
    S = [q.label for q in monoid.S]
    want = set(subsets_of(S))
    have = set(family.subsets)
    if have != want or len(family.subsets) != len(want):
        missing = sorted(want - have, key=lambda I: (len(I), sorted(I)))
        raise IncompleteFamily(f"family must contain every subset of S exactly once; "
                               f"missing {sorted(missing[0]) if missing else 'duplicates'}")
    ref = family.systems[0]
    for I, s in family.items():
        if s.monoid != monoid or s.field != ref.field or s.weight != ref.weight:
            raise IncompleteFamily(f"member I={sorted(I)} lives on different data")
        for v in S:
            g1, g2 = family.gammas[v]
            if s.eigenvalue(v) != (g1 if v in I else g2):
                raise IncompleteFamily(f"member I={sorted(I)} has the wrong eigenvalue at {v}")


def _family_from_list(systems: Sequence[EigenSystem]) -> CompanionFamily:
    """Infer I for each member: gamma_{v,2} is the value of the first member at v."""
    if not systems:
        raise IncompleteFamily("empty family")
    monoid = systems[0].monoid
    S = [q.label for q in monoid.S]
    gammas = {}
    for v in S:
        vals = []
        for s in systems:
            x = s.eigenvalue(v)
            if x not in vals:
                vals.append(x)
        if len(vals) != 2:
            raise IncompleteFamily(f"expected two eigenvalues at {v}, found {len(vals)}")
        gammas[v] = (vals[1], vals[0])
    subsets = [frozenset(v for v in S if s.eigenvalue(v) == gammas[v][0]) for s in systems]
    return CompanionFamily(monoid, gammas, subsets, list(systems))


def build_f_g(family: CompanionFamily | Sequence[EigenSystem]) -> tuple[FormalCombination, FormalCombination]:
    """The signed combinations f = sum (-1)^|I| gamma_I f_I and g = sum (-1)^|I| f_I."""
    if not isinstance(family, CompanionFamily):
        family = _family_from_list(list(family))
    _check_family(family)
    F = family.systems[0].field
    fw, gw = [], []
    for I in family.subsets:
        sign = F.one if len(I) % 2 == 0 else -F.one
        gw.append(sign)
        fw.append(sign * coerce(F, gamma_product(I, family.gammas)))
    return FormalCombination(family, fw, "f"), FormalCombination(family, gw, "g")


def classical_f_g(f1: QExpansion, f2: QExpansion, alpha, beta) -> tuple[QExpansion, QExpansion]:
    """n = 1: f = alpha f1 - beta f2 and g = f1 - f2 (f1, f2 with U_p-eigenvalues alpha, beta)."""
    F = f1.domain
    a, b = coerce(F, alpha), coerce(F, beta)
    return f1 * a - f2 * b, f1 - f2


# ---------------------------------------------------------------------------
# the lemma
# ---------------------------------------------------------------------------

def _first_nonzero(diff: np.ndarray, mask: np.ndarray | None = None) -> int | None:
    bad = diff.any(axis=1)
    if mask is not None:
        bad &= mask
    idx = np.nonzero(bad)[0]
    return int(idx[0]) if idx.size else None


def _elem_json(F: FieldDescriptor, row) -> list[int]:
    return [int(x) for x in row]


_LAST_EVALUATION: list = [None, None, None]     # (weakref to family, bound, evaluation)


def _evaluation(family: CompanionFamily, table) -> _Evaluation:
    """Evaluation of ``family`` on ``table``; the most recent one is kept so the
    lemma and the V-identity checks on the same family share it."""
    ref, bound, ev = _LAST_EVALUATION
    if table.bound is not None and ref is not None and ref() is family and bound == table.bound:
        return ev
    ev = _Evaluation(family, table)
    if table.bound is not None:
        _LAST_EVALUATION[:] = [weakref.ref(family), table.bound, ev]
    return ev


def verify_lemma(f, g, norm_bound: int | None = None, p: int | None = None) -> CompanionCertificate:
    """Both halves of the lemma, for formal combinations or classical q-expansions.

    Formal combinations (from :func:`build_f_g`) are checked on every ideal of
    norm <= norm_bound.  For q-expansions pass ``p``; part 1 then reads
    a_n(g) = 0 for p not dividing n and part 2 reads a_{pn}(g) = a_n(f), on the
    coefficients available (or below ``norm_bound`` if given).
    """
    if isinstance(f, QExpansion):
        if p is None:
            raise ValueError("p is required for q-expansions")
        return _verify_lemma_classical(f, g, p, norm_bound)
    if norm_bound is None or norm_bound < 1:
        raise ValueError("norm_bound must be >= 1")
    family = f.family
    if g.family is not family:
        raise ValueError("f and g must come from the same family")
    monoid = family.monoid
    F = f.field
    p = monoid.p
    cert = CompanionCertificate(p, checked_norm_bound=int(norm_bound))
    table = monoid.ideals_up_to(norm_bound)
    S = [q.label for q in monoid.S]
    Sidx = [monoid.index[v] for v in S]

    # part 1: for n with some v in S not dividing n, pair I with I + {v}
    ev = _evaluation(family, table)
    inside = ev.inside()
    pos = {I: j for j, I in enumerate(family.subsets)}
    vanish = np.zeros((len(table), F.k), dtype=np.int64)
    not_div = table.exps[:, Sidx] == 0                      # (n, |S|)
    chosen = np.where(not_div.any(axis=1), not_div.argmax(axis=1), -1)
    for t, v in enumerate(S):
        rows = np.flatnonzero(chosen == t)
        if not rows.size:
            continue
        acc = np.zeros((rows.size, F.k), dtype=np.int64)
        for I in family.subsets:
            if v in I:
                continue
            # c(m, f_I) - c(m, f_{I+v}); the common factor from outside S is applied below
            diff = (inside[pos[I]][rows] - inside[pos[I | {v}]][rows]) % p
            acc = (acc + diff) % p if len(I) % 2 == 0 else (acc - diff) % p
        vanish[rows] = fq_mul(F, ev.base[rows], acc)
    mask = chosen >= 0
    i = _first_nonzero(vanish, mask)
    cex = None
    if i is not None:
        cex = {"ideal": str(table.ideal(i)), "norm": int(table.norms[i]),
               "value": _elem_json(F, vanish[i])}
    cert.lemma_part1 = CheckResult(i is None, int(mask.sum()), cex)

    # part 2: b(pm) = a(m); b at pm computed directly from the recursion
    a = f.coefficients(table.exps, ev)
    b = g.coefficients(table.exps, ev, shift=True)
    diff = (a - b) % p
    i = _first_nonzero(diff)
    cex = None
    if i is not None:
        cex = {"ideal": str(table.ideal(i)), "norm": int(table.norms[i]),
               "a(m)": _elem_json(F, a[i]), "b(pm)": _elem_json(F, b[i])}
    cert.lemma_part2 = CheckResult(i is None, len(table), cex)
    if not a.any():
        cert.zero_candidate = True
        cert.notes.append(ZERO_CANDIDATE_NOTE)
    return cert


def _coeff_rows(f: QExpansion) -> np.ndarray:
    arr = np.asarray(f.array)
    return arr.reshape(f.prec, -1)


def _verify_lemma_classical(f: QExpansion, g: QExpansion, p: int, bound: int | None) -> CompanionCertificate:
    _check_char(f, p)
    _check_char(g, p)
    A, B = _coeff_rows(f), _coeff_rows(g)
    n_g = g.prec if bound is None else min(g.prec, bound + 1)
    cert = CompanionCertificate(p, checked_prec=n_g)
    idx = np.arange(n_g)
    off = (idx % p != 0)
    bad = np.nonzero(off & B[:n_g].any(axis=1))[0]
    cex = None if not bad.size else {"index": int(bad[0]), "value": _elem_json(g.domain, B[bad[0]])}
    cert.lemma_part1 = CheckResult(not bad.size, int(off.sum()), cex)
    top = min((n_g - 1) // p + 1, f.prec)
    diff = (B[:n_g][::p][:top] - A[:top]) % p
    i = _first_nonzero(diff)
    cex = None if i is None else {"index": i, "a(m)": _elem_json(f.domain, A[i]),
                                  "b(pm)": _elem_json(g.domain, B[p * i])}
    cert.lemma_part2 = CheckResult(i is None, top, cex)
    if not A[:top].any():
        cert.zero_candidate = True
        cert.notes.append(ZERO_CANDIDATE_NOTE)
    return cert


# ---------------------------------------------------------------------------
# the V-identity
# ---------------------------------------------------------------------------

def _check_char(f: QExpansion, p: int):
    c = characteristic(f.domain)
    if c != p:
        raise CharacteristicMismatch(f"series has characteristic {c}, expected {p}")


def verify_v_identity(fbar, gbar, p: int, frobenius_twist: bool = False,
                      norm_bound: int | None = None) -> CompanionCertificate:
    """V(f) = V(h) g with V(h) = 1: g supported on p | n and a_{pn}(g) = a_n(f).

    V here is the relative Frobenius, which is linear over the coefficient
    field.  With ``frobenius_twist`` the comparison is against a_n(f)^p
    instead (the absolute Frobenius); the two agree when the coefficients
    lie in F_p.  Formal combinations are checked on ideals of norm <= norm_bound
    with (p) in place of p.
    """
    if isinstance(fbar, FormalCombination):
        return _verify_v_formal(fbar, gbar, frobenius_twist, norm_bound)
    _check_char(fbar, p)
    _check_char(gbar, p)
    F = gbar.domain
    A, B = _coeff_rows(fbar), _coeff_rows(gbar)
    if fbar.domain != F:
        target = common_field(fbar.domain, F)
        A = fq_embed_array(A, fbar.domain, target)
        B = fq_embed_array(B, F, target)
        F = target
    n_g = gbar.prec
    cert = CompanionCertificate(p, checked_prec=n_g)
    idx = np.arange(n_g)
    bad = np.nonzero((idx % p != 0) & B.any(axis=1))[0]
    first = int(bad[0]) if bad.size else None
    top = min((n_g - 1) // p + 1, fbar.prec)
    want = fq_frobenius(F, A[:top]) if frobenius_twist else A[:top]
    diff = (B[::p][:top] - want) % p
    j = _first_nonzero(diff)
    if j is not None:
        j = p * j
    fails = [x for x in (first, j) if x is not None]
    cex = None
    if fails:
        n = min(fails)
        cex = {"index": n, "g": _elem_json(F, B[n])}
        if n % p == 0:
            cex["expected"] = _elem_json(F, want[n // p])
    cert.v_identity = CheckResult(not fails, n_g, cex)
    if not A[:top].any():
        cert.zero_candidate = True
        cert.notes.append(ZERO_CANDIDATE_NOTE)
    return cert


def _verify_v_formal(f: FormalCombination, g: FormalCombination, twist: bool,
                     norm_bound: int | None) -> CompanionCertificate:
    if norm_bound is None or norm_bound < 1:
        raise ValueError("norm_bound must be >= 1")
    monoid = f.family.monoid
    F = f.field
    p = monoid.p
    pI = monoid.p_ideal
    cert = CompanionCertificate(p, checked_norm_bound=int(norm_bound))
    table = monoid.ideals_up_to(norm_bound)
    # support: g(n) = 0 unless (p) | n, for N(n) <= bound
    ev = _evaluation(f.family, table)
    gb = g.coefficients(table.exps, ev)
    off = ~table.divisible_by(pI)
    i = _first_nonzero(gb, off)
    # values: g(pm) = f(m) (or f(m)^p), N(m) <= bound
    a = f.coefficients(table.exps, ev)
    want = fq_frobenius(F, a) if twist else a
    b = g.coefficients(table.exps, ev, shift=True)
    j = _first_nonzero((b - want) % p)
    cex = None
    if i is not None:
        cex = {"ideal": str(table.ideal(i)), "g": _elem_json(F, gb[i])}
    elif j is not None:
        cex = {"ideal": str(table.ideal(j) * pI), "g": _elem_json(F, b[j]),
               "expected": _elem_json(F, want[j])}
    cert.v_identity = CheckResult(i is None and j is None, int(off.sum()) + len(table), cex)
    if not a.any():
        cert.zero_candidate = True
        cert.notes.append(ZERO_CANDIDATE_NOTE)
    return cert


# ---------------------------------------------------------------------------
# Hasse division, targets, depletion
# ---------------------------------------------------------------------------

def extract_weight_one(fbar, p: int, cert: CompanionCertificate):
    """f / h: the same q-expansion declared in weight 1 (weight p - (p - 1)).

    Requires a certificate whose lemma and V-identity sections pass; the
    division is recorded in ``cert.hasse_division``.
    """
    from .spaces import ModForm, hasse_invariant

    if cert.p != p:
        raise UncertifiedInput(f"certificate is for p={cert.p}, not {p}")
    if not (cert.lemma_passed and cert.v_identity_passed):
        raise UncertifiedInput("the lemma and V-identity sections must be present and passing")
    if cert.zero_candidate:
        raise UncertifiedInput("f vanishes to the checked precision (ZeroCandidate)")
    if fbar.weight != p:
        raise WeightMismatch(f"expected weight {p}, got {fbar.weight}")
    h = hasse_invariant(p, fbar.prec).expansion
    F = fbar.domain
    if h.change_domain(F) * fbar.expansion != fbar.expansion:    # pragma: no cover - h = 1
        raise UncertifiedInput("Hasse invariant does not have q-expansion 1")
    k_out = fbar.weight - (p - 1)
    cert.hasse_division = HasseDivision(fbar.weight, p, k_out)
    return ModForm(fbar.expansion, k_out, fbar.level, fbar.character, fbar.eigenvalues, fbar.normalized)


def compare_to_target(candidate, target, p: int) -> TargetMatch:
    """Compare two weight-one forms on sturm_bound(p, N) + 1 coefficients.

    Equality of weight-one forms mod p is certified through their products
    with the Hasse invariant, which have weight p; so the weight-p Sturm bound
    is used.  Differences beyond it are not seen (a documented limitation).
    """
    if candidate.level != target.level:
        raise ValueError(f"levels differ: {candidate.level} vs {target.level}")
    bound = sturm_bound(p, candidate.level)
    n = min(candidate.prec, target.prec)
    if n < bound + 1:
        raise PrecisionTooLow(f"need {bound + 1} coefficients, have {n}")
    A, B = _coeff_rows(candidate.expansion), _coeff_rows(target.expansion)
    F1, F2 = candidate.expansion.domain, target.expansion.domain
    _check_char(candidate.expansion, p)
    _check_char(target.expansion, p)
    if F1 != F2:
        F = common_field(F1, F2)
        A, B = fq_embed_array(A, F1, F), fq_embed_array(B, F2, F)
    diff = (A[:bound + 1] - B[:bound + 1]) % p
    i = _first_nonzero(diff)
    return TargetMatch(i is None, bound, bound + 1, i)


def deplete(f, ell: int):
    """The ell-depleted form: a_n = 0 for every n divisible by ell (a_0 included).

    Accepts a ModForm (level multiplied by ell^2 in the bookkeeping) or a
    bare QExpansion.
    """
    from .spaces import ModForm

    if not sympy.isprime(ell):
        raise ValueError(f"{ell} is not prime")
    series = f.expansion if isinstance(f, ModForm) else f
    if series.domain is QQ:
        out = QExpansion([0 if i % ell == 0 else c for i, c in enumerate(series.coefficients())],
                         series.prec, QQ)
    else:
        arr = np.array(series.array, copy=True)
        arr[::ell] = 0
        out = QExpansion.from_array(arr, series.domain)
    if isinstance(f, ModForm):
        return ModForm(out, f.weight, f.level * ell * ell, f.character, None, f.normalized)
    return out


# ---------------------------------------------------------------------------
# the classical pipeline (F = Q)
# ---------------------------------------------------------------------------

def distinguished_primes(target, start: int = 5, stop: int = 200) -> list[int]:
    """Primes p >= start not dividing N with x^2 - a_p x + chi(p) separable mod p."""
    out = []
    chi = target.character.lift(target.level)
    for p in sympy.primerange(start, stop):
        if target.level % p == 0 or p >= target.prec:
            continue
        ap = int(target.expansion[p])
        e = chi.exponent(p)
        if chi.order > 2:
            raise ValueError("distinguished_primes expects a character of order <= 2")
        cp = 1 if e == 0 else -1
        if (ap * ap - 4 * cp) % p:
            out.append(p)
    return out


@dataclass
class ClassicalRun:
    """Everything the classical companion pipeline produced."""

    p: int
    alpha: FqElem
    beta: FqElem
    f_alpha: object
    f_beta: object
    f: QExpansion
    g: QExpansion
    weight_one: object
    certificate: CompanionCertificate
    dimension: int
    hecke_primes: list[int]


def _frobenius_roots(ap: int, cp: int, p: int) -> tuple[FieldDescriptor, FqElem, FqElem]:
    from .ffield import quadratic_roots
    F2 = make_field(p, 2)
    roots = quadratic_roots(-ap, cp, F2).roots
    if len(roots) != 2:
        raise ValueError("Frobenius eigenvalues are not distinct")
    F = make_field(p) if all(r.in_prime_field() for r in roots) else F2
    return F, roots[0], roots[1]


def classical_companion(target, p: int, hecke_primes: Sequence[int] | None = None,
                        prec: int | None = None, normalize: bool = True,
                        full_space: bool = False) -> ClassicalRun:
    """Run the construction for a weight-one eigenform ``target`` over Q.

    Builds M_p(Gamma_1(N), chi) mod p, finds the two eigenforms agreeing with
    ``target`` away from p (U_p-eigenvalues alpha, beta: the roots of
    x^2 - a_p x + chi(p)), forms f and g, checks the lemma and V-identity,
    divides by the Hasse invariant and compares with ``target`` mod p.  With
    ``normalize`` the weight-one form is scaled to a_1 = 1 (f has a_1 = alpha - beta).
    With ``full_space`` the whole of M_p(Gamma_1(N)) is decomposed (diamond
    operators included) instead of only its chi-part.
    """
    from .spaces import ModForm, eigen_decomposition, space_basis

    N = target.level
    chi = target.character.lift(N)
    if hecke_primes is None:
        hecke_primes = [l for l in sympy.primerange(2, 12) if N % l]
    primes = sorted(set(int(l) for l in hecke_primes) | {p})
    sturm = sturm_bound(p, N)
    if prec is None:
        prec = max(primes) * sturm + 10
    basis = space_basis(p, N, p, prec=prec, character=None if full_space else chi)
    basis.require_complete()
    dec = eigen_decomposition(basis, primes, strict=False)
    cp = 1 if chi.exponent(p) == 0 else -1
    ap = int(target.expansion[p])
    _, r1, r2 = _frobenius_roots(ap % p, cp % p, p)
    Fbig = make_field(p, 2)
    tgt = [int(target.expansion[n]) % p for n in range(min(target.prec, prec))]
    found: dict[FqElem, object] = {}
    for form in dec.forms:
        if form.character is not None and form.character.lift(N) != chi:
            continue
        ok = True
        for l in primes:
            if l == p:
                continue
            if embed(form.eigenvalues[l], Fbig) != Fbig(tgt[l]):
                ok = False
                break
        if not ok:
            continue
        lam = embed(form.eigenvalues[p], Fbig)
        if lam in (r1, r2):
            found[lam] = form
    if r1 not in found or r2 not in found:
        raise NotDiagonalizable(
            f"could not locate eigenforms with U_{p}-eigenvalues {r1}, {r2} congruent to the target",
            dimension=basis.dimension)
    fa, fb = found[r1], found[r2]
    F = common_field(fa.expansion.domain, fb.expansion.domain)
    if all(r.in_prime_field() for r in (r1, r2)):
        F = make_field(p)
    alpha = _to_field(r1, F)
    beta = _to_field(r2, F)
    sa = fa.expansion.change_domain(F) if fa.expansion.domain != F else fa.expansion
    sb = fb.expansion.change_domain(F) if fb.expansion.domain != F else fb.expansion
    f, g = classical_f_g(sa, sb, alpha, beta)
    cert = verify_lemma(f, g, p=p)
    cert.merge(verify_v_identity(f, g, p))
    fbar = ModForm(f, p, N, chi)
    h1 = extract_weight_one(fbar, p, cert)
    if normalize:
        scale = (alpha - beta).inverse()
        h1 = ModForm(h1.expansion * scale, 1, N, chi)
    tmod = ModForm(QExpansion([c % p for c in tgt], len(tgt), F), 1, N, chi)
    cert.target_match = compare_to_target(h1, tmod, p)
    return ClassicalRun(p, alpha, beta, fa, fb, f, g, h1, cert, basis.dimension, primes)


def _to_field(x: FqElem, F: FieldDescriptor) -> FqElem:
    if x.field == F:
        return x
    if F.k == 1:
        if not x.in_prime_field():
            raise ValueError("element is not in the prime field")
        return F(x.coeffs[0])
    return embed(x, F)
