"""Classical modular forms on Gamma_1(N) modulo p, to a working precision.

The space M_k(Gamma_1(N)) over F_p is spanned by reductions of Eisenstein
series and their products.  Eisenstein series with character take values in
Z[zeta_M] (M = exponent of (Z/N)*).  We compute them over the ring
R = F_p[x]/Phi_M(x) and split each R-valued series into its power-basis
coordinates: every coordinate is the reduction of a form with rational
q-expansion, so no choice of embedding of characters is needed while spanning,
and the method works even when p divides phi(N).

Every basis vector remembers which generator coordinates it was built from.
Hecke and diamond operators are applied to the generators, where they are
explicit (each generator is an eigenvector for the diamond operators), and the
results are pushed back through the recorded transform.

Constant-term convention for Eisenstein series E_k^{chi,psi} (chi, psi
primitive; coefficients sum_{d|n} psi(d) chi(n/d) d^(k-1)):

* k >= 2: c_0 = -B_{k,psi}/(2k) if chi is trivial, else 0;
* k = 1:  c_0 = -B_{1,psi}/2 if chi is trivial, -B_{1,chi}/2 if psi is
  trivial, else 0;

with B_1 = -1/2.  :func:`eisenstein` rescales the case of two trivial
characters to constant term 1, so E_4 = 1 + 240 q + ...
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
import sympy
from sympy import factorint, totient

from . import linalg
from .characters import (
    DirichletChar,
    Cyclotomic,
    char_group,
    cyclotomic_modulus,
    embed_char,
    gen_bernoulli_vector,
    group_exponent,
    power_reduction,
    bernoulli_number,
    unit_generators,
    zeta_power,
)
from .errors import (
    NotComputable,
    NotDiagonalizable,
    NotModular,
    NotNormalizable,
    NotPIntegral,
    NotPrime,
    ParityMismatch,
    PrecisionTooLow,
    SpanningIncomplete,
    UnsupportedCharacteristic,
    NoEmbedding,
    NotInSpan,
)
from .ffield import FieldDescriptor, FqElem, fq_mul, make_field, quadratic_roots
from .qseries import QQ, Comparison, QExpansion, Verdict, algebra_mul, compare, sturm_bound

log = logging.getLogger(__name__)

#: Hecke primes whose operators a default-precision basis supports.
DEFAULT_HECKE_BOUND = 3
#: Extra coefficients carried beyond ell_max * Sturm.
PRECISION_HEADROOM = 10


def default_precision(k: int, N: int, hecke_bound: int = DEFAULT_HECKE_BOUND) -> int:
    """Working precision ell_max * Sturm + headroom."""
    return hecke_bound * sturm_bound(k, N) + PRECISION_HEADROOM


def _frac_mod(x: Fraction, mod: int) -> int:
    return x.numerator * pow(x.denominator, -1, mod) % mod


def _vp(x: Fraction, p: int) -> int:
    if x == 0:
        return 10**9
    v, num, den = 0, x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


# ---------------------------------------------------------------------------
# modular forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ModForm:
    """A q-expansion together with its weight, level and (optional) character.

    ``character`` is None for forms on Gamma_1(N) without a declared
    nebentypus.  Equality is decided on the first sturm_bound(weight, level)+1
    coefficients.
    """

    expansion: QExpansion
    weight: int
    level: int
    character: DirichletChar | None = None
    eigenvalues: Mapping[int, FqElem] | None = None
    normalized: bool = True

    def __post_init__(self):
        if self.weight < 1 or self.level < 1:
            raise ValueError("weight and level must be positive")
        if self.character is not None and self.level % self.character.modulus:
            raise ValueError("character modulus must divide the level")

    @property
    def domain(self):
        return self.expansion.domain

    @property
    def prec(self) -> int:
        return self.expansion.prec

    def __getitem__(self, n):
        return self.expansion[n]

    @property
    def sturm(self) -> int:
        return sturm_bound(self.weight, self.level)

    def compare(self, other: "ModForm") -> Comparison:
        """Compare q-expansions up to the Sturm bound of the larger weight and level."""
        N = math.lcm(self.level, other.level)
        bound = sturm_bound(max(self.weight, other.weight), N) + 1
        return compare(self.expansion, other.expansion, bound)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModForm):
            return NotImplemented
        if self.weight != other.weight:
            return False
        c = self.compare(other)
        if c.verdict is Verdict.INSUFFICIENT:
            raise PrecisionTooLow(f"need {sturm_bound(self.weight, math.lcm(self.level, other.level)) + 1} "
                                  f"coefficients, have {c.prec}")
        return c.verdict is Verdict.EQUAL

    __hash__ = None

    def to_json(self) -> dict:
        out = {
            "weight": self.weight,
            "level": self.level,
            "character": None if self.character is None else self.character.to_json(),
            "normalized": self.normalized,
            "expansion": self.expansion.to_json(),
        }
        if self.eigenvalues is not None:
            out["eigenvalues"] = {str(l): v.to_json() for l, v in self.eigenvalues.items()}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ModForm":
        chi = data.get("character")
        expansion = QExpansion.from_json(data["expansion"])
        eig = data.get("eigenvalues")
        if eig is not None:
            F = expansion.domain
            eig = {int(l): F(v) for l, v in eig.items()}
        return cls(expansion, int(data["weight"]), int(data["level"]),
                   None if chi is None else DirichletChar.from_json(chi), eig,
                   bool(data.get("normalized", True)))

    def __repr__(self) -> str:
        chi = "" if self.character is None else f", chi={list(self.character.exponents)}"
        return f"ModForm(k={self.weight}, N={self.level}{chi}, {self.expansion!r})"


# ---------------------------------------------------------------------------
# Eisenstein series
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def primitive_characters(N: int) -> tuple[DirichletChar, ...]:
    """Primitive characters of conductor dividing N, by conductor then exponents."""
    out = []
    for d in sympy.divisors(N):
        out.extend(chi for chi in char_group(d) if chi.conductor == d)
    return tuple(out)


@dataclass(frozen=True)
class EisensteinDatum:
    """E_weight^{chi,psi}(q^t) with chi, psi primitive.

    For weight 2 with both characters trivial this stands for
    E_2(q) - t E_2(q^t) (t > 1).
    """

    weight: int
    chi: DirichletChar
    psi: DirichletChar
    t: int = 1

    @property
    def level(self) -> int:
        return self.chi.modulus * self.psi.modulus * self.t

    def nebentypus(self, N: int) -> DirichletChar:
        return (self.chi * self.psi).lift(N)

    def conjugate(self, u: int) -> "EisensteinDatum":
        return EisensteinDatum(self.weight, self.chi ** u, self.psi ** u, self.t)

    def key(self) -> tuple:
        return (self.weight, self.chi.modulus, self.chi.exponents, self.psi.modulus,
                self.psi.exponents, self.t)


@lru_cache(maxsize=None)
def eisenstein_data(k: int, N: int) -> tuple[EisensteinDatum, ...]:
    """All Eisenstein series of weight k used as generators at level N."""
    prims = primitive_characters(N)
    out = []
    for chi in prims:
        for psi in prims:
            L, R = chi.modulus, psi.modulus
            if N % (L * R):
                continue
            if chi.parity * psi.parity != (-1) ** k:
                continue
            if k == 1 and (R, psi.exponents) < (L, chi.exponents):
                continue  # E_1^{chi,psi} = E_1^{psi,chi}
            for t in sympy.divisors(N // (L * R)):
                if k == 2 and chi.is_trivial() and psi.is_trivial() and t == 1:
                    continue
                out.append(EisensteinDatum(k, chi, psi, t))
    return tuple(out)


def _constant_term(d: EisensteinDatum, M: int) -> Cyclotomic:
    """Constant term in Q(zeta_M) power-basis coordinates."""
    k, chi, psi = d.weight, d.chi, d.psi
    if k == 2 and chi.is_trivial() and psi.is_trivial() and d.t > 1:
        c = Fraction(d.t - 1, 24)
        return Cyclotomic(M, [c] + [0] * (len(cyclotomic_modulus(M)) - 2))
    zero = Cyclotomic(M, [0] * (len(cyclotomic_modulus(M)) - 1))
    if chi.is_trivial():
        b = gen_bernoulli_vector(k, psi, M)
        s = Fraction(-1, 2 * k)
    elif k == 1 and psi.is_trivial():
        b = gen_bernoulli_vector(k, chi, M)
        s = Fraction(-1, 2)
    else:
        return zero
    return Cyclotomic(M, [s * c for c in b.coeffs])


def _divisor_sum_table(d: EisensteinDatum, M: int, mod: int, prec: int) -> np.ndarray:
    """Array (prec, M): entry [n, e] = sum of d^(k-1) over terms with value zeta_M^e, mod ``mod``."""
    k, chi, psi, t = d.weight, d.chi, d.psi, d.t
    acc = np.zeros((prec, M), dtype=np.int64)
    tc = chi.exponent_table(M)
    tp = psi.exponent_table(M)
    L, R = chi.modulus, psi.modulus
    top = (prec - 1) // t
    for dd in range(1, top + 1):
        ep = int(tp[dd % R])
        if ep < 0:
            continue
        m = np.arange(1, top // dd + 1)
        ec = tc[m % L]
        ok = ec >= 0
        n = t * dd * m[ok]
        e = (ec[ok] + ep) % M
        np.add.at(acc, (n, e), pow(dd, k - 1, mod))
    acc %= mod
    if k == 2 and chi.is_trivial() and psi.is_trivial() and t > 1:
        # E_2(q) - t E_2(q^t)
        base = EisensteinDatum(2, chi, psi, 1)
        full = _divisor_sum_table(base, M, mod, prec)
        acc = (full - d.t * acc) % mod
    return acc


def _eisenstein_R(d: EisensteinDatum, M: int, p: int, prec: int, m: int = 1) -> np.ndarray:
    """The datum's series over (Z/p^m)[x]/Phi_M as an array (prec, phi(M)).

    If the constant term is not p-integral the whole series is multiplied by
    the smallest power of p making it integral (mod p its reduction is then
    a constant).
    """
    mod = p**m
    c0 = _constant_term(d, M)
    v = min((_vp(c, p) for c in c0.coeffs if c), default=0)
    s = max(0, -v)
    scale = p**s
    if s >= m:
        out = np.zeros((prec, len(c0.coeffs)), dtype=np.int64)
    else:
        acc = _divisor_sum_table(d, M, mod, prec)
        out = linalg.matmul_mod(acc, power_reduction(M) % mod, mod) * scale % mod
    out[0] = [(int(out[0, j]) + _frac_mod(c * scale, mod)) % mod for j, c in enumerate(c0.coeffs)]
    return out


def _check_primitive(chi: DirichletChar, name: str):
    if not chi.is_primitive():
        raise ValueError(f"{name} must be primitive (use .primitive())")


def eisenstein(k: int, chi: DirichletChar, psi: DirichletChar, prec: int, t: int = 1,
               field: FieldDescriptor | None = None) -> ModForm:
    """Eisenstein series E_k^{chi,psi}(q^t) of level chi.modulus * psi.modulus * t.

    Over QQ when both characters are at most quadratic and ``field`` is None;
    otherwise over ``field``, into which the character values are embedded.
    With both characters trivial the series is scaled to constant term 1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    _check_primitive(chi, "chi")
    _check_primitive(psi, "psi")
    if chi.parity * psi.parity != (-1) ** k:
        raise ParityMismatch(f"(chi psi)(-1) = {chi.parity * psi.parity} != (-1)^{k}")
    if k == 2 and chi.is_trivial() and psi.is_trivial() and t == 1:
        raise NotModular("E_2 is not a modular form")
    d = EisensteinDatum(k, chi, psi, t)
    N = d.level
    trivial = chi.is_trivial() and psi.is_trivial()
    neb = d.nebentypus(N)
    if chi.order <= 2 and psi.order <= 2:
        series = _eisenstein_rational(d, prec)
        if trivial:
            series = series * (1 / series[0])
        if field is not None:
            series = series.change_domain(field)
        return ModForm(series, k, N, neb)
    if field is None:
        raise NoEmbedding("character values are not rational; pass a finite field")
    M = math.lcm(chi.order, psi.order)
    c0 = _constant_term(d, M)
    p = field.p
    if any(_vp(c, p) < 0 for c in c0.coeffs):
        raise NotPIntegral(f"constant term is not {p}-integral")
    arr = _eisenstein_R(d, M, p, prec)
    MN = group_exponent(N)
    omega = zeta_power(field, MN, MN // M)
    powers = np.array([(omega ** j).coeffs for j in range(arr.shape[1])], dtype=np.int64)
    data = linalg.matmul_mod(arr, powers, p)
    return ModForm(QExpansion.from_array(data, field), k, N, neb)


def _eisenstein_rational(d: EisensteinDatum, prec: int) -> QExpansion:
    k, chi, psi, t = d.weight, d.chi, d.psi, d.t

    def val(c: DirichletChar, n: int) -> int:
        e = c.exponent(n)
        if e is None:
            return 0
        return 1 if e == 0 else -1

    coeffs = [Fraction(0)] * prec
    top = (prec - 1) // t
    for n in range(1, top + 1):
        s = 0
        for dd in sympy.divisors(n):
            s += val(psi, dd) * val(chi, n // dd) * dd ** (k - 1)
        coeffs[n * t] = Fraction(s)
    if k == 2 and chi.is_trivial() and psi.is_trivial() and t > 1:
        base = _eisenstein_rational(EisensteinDatum(2, chi, psi, 1), prec)
        coeffs = [base[n] - t * coeffs[n] for n in range(prec)]
    if prec:
        coeffs[0] = _constant_term(d, 2).coeffs[0]  # Q(zeta_2) = Q
    return QExpansion(coeffs, prec, QQ)


def hasse_invariant(p: int, prec: int) -> ModForm:
    """E_{p-1} reduced mod p: weight p-1, level 1, q-expansion 1.

    Computed honestly from 1 - (2k/B_k) sum sigma_{k-1}(n) q^n; the
    coefficient 2k/B_k is divisible by p by von Staudt-Clausen.
    """
    if not sympy.isprime(p):
        raise NotPrime(f"{p} is not prime")
    if p in (2, 3):
        raise UnsupportedCharacteristic("the Hasse invariant is modelled by E_{p-1} only for p >= 5")
    k = p - 1
    c = Fraction(-2 * k) / bernoulli_number(k)
    if c.denominator % p == 0:
        raise NotPIntegral("unexpected denominator")  # pragma: no cover
    cmod = _frac_mod(c, p)
    arr = np.zeros(prec, dtype=np.int64)
    if prec:
        arr[0] = 1
    if cmod:
        sig = np.zeros(prec, dtype=np.int64)
        for dd in range(1, prec):
            sig[dd::dd] = (sig[dd::dd] + pow(dd, k - 1, p)) % p
        arr[1:] = sig[1:] * cmod % p
    F = make_field(p)
    return ModForm(QExpansion.from_array(arr[:, None], F), k, 1, DirichletChar(1))


# ---------------------------------------------------------------------------
# dimensions
# ---------------------------------------------------------------------------

def _gamma1_invariants(N: int) -> tuple[Fraction, int, int, int, int]:
    """(index in PSL_2, e2, e3, regular cusps, irregular cusps) for Gamma_1(N)."""
    if N == 1:
        return Fraction(1), 1, 1, 1, 0
    if N == 2:
        return Fraction(3), 1, 0, 2, 0
    if N == 3:
        return Fraction(4), 0, 1, 2, 0
    if N == 4:
        return Fraction(6), 0, 0, 2, 1
    mu = N * N
    for ell in factorint(N):
        mu = mu // (ell * ell) * (ell * ell - 1)
    cusps = sum(int(totient(d)) * int(totient(N // d)) for d in sympy.divisors(N)) // 2
    return Fraction(mu, 2), 0, 0, cusps, 0


def _dimension_gamma1(k: int, N: int) -> int:
    mu, e2, e3, creg, cirr = _gamma1_invariants(N)
    c = creg + cirr
    g = 1 + mu / 12 - Fraction(e2, 4) - Fraction(e3, 3) - Fraction(c, 2)
    if k % 2 == 0:
        d = (k - 1) * (g - 1) + (k // 4) * e2 + (k // 3) * e3 + Fraction(k, 2) * c
    else:
        if N <= 2:
            return 0
        d = (k - 1) * (g - 1) + (k // 3) * e3 + Fraction(k, 2) * creg + Fraction(k - 1, 2) * cirr
    assert d.denominator == 1
    return int(d)


def _character_sum(chi: DirichletChar, roots: Iterable[int]) -> Fraction:
    M = chi.group_exponent
    terms: dict[int, Fraction] = {}
    for x in roots:
        e = chi.exponent(x)
        if e is not None:
            terms[e] = terms.get(e, Fraction(0)) + 1
    return Cyclotomic.from_exponent_sum(M, terms).rational()


def _dimension_sector(k: int, N: int, chi: DirichletChar) -> int:
    """Cohen-Oesterle formula for dim M_k(Gamma_0(N), chi), k >= 2."""
    if chi.parity != (-1) ** k:
        return 0
    fac = factorint(N)
    mu0 = Fraction(N)
    for ell in fac:
        mu0 *= Fraction(ell + 1, ell)
    cond = chi.conductor
    lam = 1
    for ell, r in fac.items():
        s = 0
        c = cond
        while c % ell == 0:
            c //= ell
            s += 1
        if 2 * s <= r:
            lam *= ell ** (r // 2) + ell ** (r // 2 - 1) if r % 2 == 0 else 2 * ell ** (r // 2)
        else:
            lam *= 2 * ell ** (r - s)
    g4 = {0: Fraction(1, 4), 2: Fraction(-1, 4)}.get(k % 4, Fraction(0))
    g3 = {0: Fraction(1, 3), 2: Fraction(-1, 3), 1: Fraction(0)}[k % 3]
    s4 = _character_sum(chi, (x for x in range(N) if (x * x + 1) % N == 0)) if g4 else 0
    s3 = _character_sum(chi, (x for x in range(N) if (x * x + x + 1) % N == 0)) if g3 else 0
    d = (k - 1) * mu0 / 12 + Fraction(lam, 2) + g4 * s4 + g3 * s3
    assert d.denominator == 1, d
    return int(d)


def dimension(k: int, N: int, chi: DirichletChar | None = None) -> int:
    """dim M_k(Gamma_1(N)), or of its chi-sector, for k >= 2.

    Weight one raises NotComputable: its dimension is not given by a formula.
    """
    if N < 1:
        raise ValueError("level must be positive")
    if k == 1:
        raise NotComputable("dimensions of weight-one spaces are not formulaic")
    if k < 1:
        return 0
    if chi is None:
        return _dimension_gamma1(k, N)
    if chi.modulus != N:
        chi = chi.lift(N)
    return _dimension_sector(k, N, chi)


# ---------------------------------------------------------------------------
# spanning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Generator:
    """A product of Eisenstein series; its nebentypus is the product of theirs."""

    factors: tuple[EisensteinDatum, ...]
    neb: DirichletChar

    def label(self) -> str:
        parts = []
        for d in self.factors:
            parts.append(f"E{d.weight}[{d.chi.modulus}:{list(d.chi.exponents)},"
                         f"{d.psi.modulus}:{list(d.psi.exponents)},t={d.t}]")
        return "*".join(parts)


class _Ring:
    """Arithmetic helpers for (Z/mod)[x]/Phi_M."""

    def __init__(self, M: int, mod: int):
        self.M, self.mod = M, mod
        self.modulus = tuple(c % mod for c in cyclotomic_modulus(M))
        self.dim = len(self.modulus) - 1
        self.powers = power_reduction(M) % mod
        self._shifts: dict[int, np.ndarray] = {}

    def shift(self, e: int) -> np.ndarray:
        """Matrix of multiplication by x^e acting on coordinate rows."""
        e %= self.M
        if e not in self._shifts:
            self._shifts[e] = self.powers[(np.arange(self.dim) + e) % self.M]
        return self._shifts[e]

    def mul_x(self, arr: np.ndarray, e: int) -> np.ndarray:
        if e % self.M == 0:
            return arr % self.mod
        return linalg.matmul_mod(arr, self.shift(e), self.mod)

    def mul(self, a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
        return algebra_mul(a, b, self.mod, self.modulus, n)


class _SeriesCache:
    """Eisenstein series over (Z/p^m)[x]/Phi_M, computed once at full precision."""

    def __init__(self, M: int, p: int, prec: int):
        self.M, self.p, self.prec = M, p, prec
        self._data: dict[tuple, np.ndarray] = {}
        self._rings: dict[int, _Ring] = {}

    def ring(self, m: int) -> _Ring:
        if m not in self._rings:
            self._rings[m] = _Ring(self.M, self.p**m)
        return self._rings[m]

    def datum(self, d: EisensteinDatum, m: int) -> np.ndarray:
        key = (d, m)
        if key not in self._data:
            self._data[key] = _eisenstein_R(d, self.M, self.p, self.prec, m)
        return self._data[key]

    def series(self, gen: _Generator, m: int, n: int) -> np.ndarray:
        ring = self.ring(m)
        ser = self.datum(gen.factors[0], m)[:n]
        for f in gen.factors[1:]:
            ser = ring.mul(ser, self.datum(f, m)[:n], n)
        return ser % ring.mod


@dataclass(eq=False)
class _Block:
    """Integral combinations of generator coordinates, divided by powers of p.

    Row i of the block is the form (coeffs[i] . S) / p^shifts[i] reduced mod p,
    where S stacks the power-basis coordinates of the generators (known mod
    p^m).  Plain blocks have m = 1, identity coefficients and zero shifts.
    """

    gens: list[_Generator]
    coeffs: np.ndarray
    shifts: np.ndarray
    m: int
    ring: _Ring
    series: list[np.ndarray] = dc_field(default_factory=list, repr=False)

    def values(self, rows: np.ndarray, p: int) -> np.ndarray:
        """Block rows from stacked generator coordinate rows (mod p^m)."""
        mod = p**self.m
        V = linalg.matmul_mod(self.coeffs, rows, mod)
        out = np.zeros_like(V)
        for s in np.unique(self.shifts):
            sel = self.shifts == s
            q = p ** int(s)
            if (V[sel] % q).any():
                raise NotInSpan("saturated combination is not divisible by p beyond the Sturm bound")
            out[sel] = (V[sel] // q) % p
        return out

    def image(self, op, p: int) -> np.ndarray:
        """Block rows of op applied to every generator (op maps (gen, series) to series)."""
        rows = np.vstack([op(g, s).T for g, s in zip(self.gens, self.series)])
        return self.values(rows, p)


def _galois_key(factors: Sequence[EisensteinDatum], units: Sequence[int]) -> tuple:
    best = None
    for u in units:
        key = tuple(sorted(f.conjugate(u).key() for f in factors))
        if best is None or key < best:
            best = key
    return best


def _data_by_nebentypus(w: int, N: int) -> dict[tuple, list[EisensteinDatum]]:
    out: dict[tuple, list[EisensteinDatum]] = {}
    for d in eisenstein_data(w, N):
        out.setdefault(d.nebentypus(N).exponents, []).append(d)
    return out


def _candidate_products(k: int, N: int, nebs: Sequence[DirichletChar],
                        max_factors: int) -> Iterator[tuple[EisensteinDatum, ...]]:
    """Factorizations with nebentypus in ``nebs``: E_k, then pairs, then triples.

    The same product may be produced in several orders; callers dedupe.
    """
    index = {w: _data_by_nebentypus(w, N) for w in range(1, k + 1)}
    wanted = {c.exponents: c for c in nebs}

    def complete(chars: Sequence[DirichletChar], w: int):
        have = chars[0] if chars else DirichletChar.trivial(N)
        for c in chars[1:]:
            have = have * c
        for target in wanted.values():
            yield from index[w].get((target * have.inverse()).exponents, ())

    for target in wanted:
        yield from ((d,) for d in index[k].get(target, ()))
    # most balanced weight splits first: they span fastest in practice
    for a in range(k // 2, 0, -1):
        for d1 in eisenstein_data(a, N):
            for d2 in complete([d1.nebentypus(N)], k - a):
                yield (d1, d2)
    if max_factors >= 3:
        splits = [(a, b) for a in range(1, k // 3 + 1) for b in range(a, (k - a) // 2 + 1)]
        splits.sort(key=lambda ab: (-ab[0], -ab[1]))
        for a, b in splits:
            for d1 in eisenstein_data(a, N):
                for d2 in eisenstein_data(b, N):
                    for d3 in complete([d1.nebentypus(N), d2.nebentypus(N)], k - a - b):
                        yield (d1, d2, d3)


def _neb_classes(N: int, p: int, k: int) -> list[list[DirichletChar]]:
    """Characters mod N grouped by the Galois orbit of their prime-to-p part.

    Reductions of forms from different groups are independent mod p; within a
    group (only nontrivial when p divides the exponent of (Z/N)*) they are not.
    """
    groups: dict[tuple, list[DirichletChar]] = {}
    for chi in char_group(N):
        if chi.parity != (-1) ** k:
            continue
        o = chi.order
        pa = 1
        while o % p == 0:
            o //= p
            pa *= p
        key = min(c.exponents for c in _galois_orbit(chi ** pa))
        groups.setdefault(key, []).append(chi)
    return [groups[key] for key in sorted(groups)]


SATURATION_EXPONENT = 3


def _saturate(pool: list[_Generator], cache: _SeriesCache, short: int, target: int,
              p: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Divide integral relations by p until the reductions reach ``target``.

    Rows start as the coordinates of the pool generators, known mod p^m on
    the first ``short`` coefficients.  A combination vanishing mod p there
    vanishes mod p identically (Sturm), so it may be divided by p; it replaces
    one row it involves with a unit coefficient, which keeps the Z_(p)-span
    and enlarges it.  Returns (coefficients, shifts, rank).
    """
    m = SATURATION_EXPONENT
    mod = p**m
    S = np.vstack([cache.series(g, m, short).T for g in pool])
    n = len(S)
    C = np.eye(n, dtype=np.int64)
    sh = np.zeros(n, dtype=np.int64)
    V = S % mod
    while True:
        A = V % p
        K = linalg.left_kernel(A, p)
        rank = n - len(K)
        if not len(K) or rank >= target:
            break
        changed = False
        newC, newsh = C.copy(), sh.copy()
        for kv in K:
            supp = np.nonzero(kv)[0]
            smax = int(sh[supp].max())
            if smax + 1 > m - 1:
                continue
            i = int(supp[0])   # kernel rows are reduced: coefficient 1 here
            scale = np.array([p ** (smax - int(sh[j])) for j in supp], dtype=np.int64)
            newC[i] = linalg.matmul_mod((kv[supp] * scale)[None, :], C[supp], mod)[0]
            newsh[i] = smax + 1
            changed = True
        if not changed:
            break
        C, sh = newC, newsh
        V = linalg.matmul_mod(C, S, mod)
        for s in np.unique(sh):
            sel = sh == s
            q = p ** int(s)
            if (V[sel] % q).any():
                raise NotInSpan("relation mod p does not lift: precision below the Sturm bound?")
            V[sel] = V[sel] // q
    R, keep = linalg.rref(A.T, p)
    return C[keep], sh[keep], len(keep)


def _span_class(k: int, N: int, p: int, chars: list[DirichletChar], target: int,
                cache: _SeriesCache, short: int, units: Sequence[int], seen: set,
                budget: int, max_factors: int) -> tuple[list[_Block], int, int]:
    """Blocks spanning the forms with nebentypus in ``chars``; (blocks, rank, tried)."""
    builder = linalg.EchelonBuilder(short, p)
    accepted: list[_Generator] = []
    rejected: list[_Generator] = []
    pool_cap = max(50, 3 * target // cache.ring(1).dim)
    tried = 0
    for factors in _candidate_products(k, N, chars, max_factors):
        if builder.rank >= target or tried >= budget:
            break
        key = _galois_key(factors, units)
        if key in seen:
            continue
        seen.add(key)
        tried += 1
        neb = factors[0].nebentypus(N)
        for f in factors[1:]:
            neb = neb * f.nebentypus(N)
        gen = _Generator(tuple(factors), neb)
        if builder.add(cache.series(gen, 1, short).T):
            accepted.append(gen)
        elif len(rejected) < pool_cap:
            rejected.append(gen)
    ring1 = cache.ring(1)
    if builder.rank >= target or not rejected:
        n = len(accepted) * ring1.dim
        block = _Block(accepted, np.eye(n, dtype=np.int64), np.zeros(n, dtype=np.int64), 1, ring1)
        return [block], builder.rank, tried
    log.info("saturating: rank %d of %d mod %d for k=%d N=%d", builder.rank, target, p, k, N)
    pool = accepted + rejected
    C, sh, rank = _saturate(pool, cache, short, target, p)
    d = ring1.dim
    used = [i for i in range(len(pool)) if C[:, i * d:(i + 1) * d].any()]
    cols = np.concatenate([np.arange(i * d, (i + 1) * d) for i in used]) if used else np.zeros(0, int)
    block = _Block([pool[i] for i in used], C[:, cols], sh, SATURATION_EXPONENT,
                   cache.ring(SATURATION_EXPONENT))
    return [block], rank, tried


@dataclass(eq=False)
class SpaceBasis:
    """Echelon basis of (a sector of) M_k(Gamma_1(N)) over F_p to precision ``prec``.

    ``matrix`` holds the basis q-expansions as rows (leftmost pivots, reduced
    echelon form).  ``character`` is None for the full Gamma_1(N) space.
    """

    weight: int
    level: int
    p: int
    prec: int
    character: DirichletChar | None
    matrix: np.ndarray
    pivots: list[int]
    expected_dimension: int
    generators_tried: int = 0
    _blocks: list = dc_field(default_factory=list, repr=False)
    _transform: np.ndarray | None = dc_field(default=None, repr=False)
    _M: int = dc_field(default=1, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    @property
    def spanning_incomplete(self) -> bool:
        return self.dimension < self.expected_dimension

    def require_complete(self) -> "SpaceBasis":
        if self.spanning_incomplete:
            raise SpanningIncomplete(
                f"Eisenstein products span only {self.dimension} of {self.expected_dimension} "
                f"dimensions of M_{self.weight}(Gamma_1({self.level})) mod {self.p}",
                rank=self.dimension, dimension=self.expected_dimension)
        return self

    @property
    def field(self) -> FieldDescriptor:
        return make_field(self.p)

    @property
    def sturm(self) -> int:
        return sturm_bound(self.weight, self.level)

    @property
    def forms(self) -> list[ModForm]:
        F = self.field
        return [ModForm(QExpansion.from_array(row[:, None], F), self.weight, self.level,
                        self.character) for row in self.matrix]

    def coordinates(self, expansion: QExpansion) -> np.ndarray:
        """Coordinates of a q-expansion in this basis (checked on the common precision)."""
        arr = np.asarray(expansion.array).reshape(expansion.prec, -1)[:, 0]
        n = min(len(arr), self.prec)
        if n < self.sturm + 1:
            raise PrecisionTooLow(f"need {self.sturm + 1} coefficients")
        return linalg.coordinates(arr[None, :n], self.matrix[:, :n], self.pivots, self.p)[0]

    def generator_labels(self) -> list[str]:
        return [g.label() for b in self._blocks for g in b.gens]

    def to_json(self) -> dict:
        return {
            "k": self.weight,
            "N": self.level,
            "p": self.p,
            "character": None if self.character is None else self.character.to_json(),
            "dimension": self.dimension,
            "expected_dimension": self.expected_dimension,
            "spanning_incomplete": self.spanning_incomplete,
            "prec": self.prec,
            "pivots": list(self.pivots),
            "basis": [[int(x) for x in row] for row in self.matrix],
        }

    def __repr__(self) -> str:
        sector = "" if self.character is None else f", chi={list(self.character.exponents)}"
        flag = " INCOMPLETE" if self.spanning_incomplete else ""
        return (f"SpaceBasis(k={self.weight}, N={self.level}, p={self.p}{sector}, "
                f"dim={self.dimension}/{self.expected_dimension}, prec={self.prec}{flag})")


def _validate(k: int, N: int, p: int):
    if N < 1:
        raise ValueError("level N must be >= 1")
    if k == 1:
        raise NotComputable("weight-one spaces are not spanned by this method")
    if k < 1:
        raise ValueError("weight must be >= 2")
    if not sympy.isprime(p):
        raise NotPrime(f"{p} is not prime")
    if p in (2, 3) or N % p == 0:
        raise UnsupportedCharacteristic(f"need p >= 5 and p not dividing N (p={p}, N={N})")


def _galois_orbit(chi: DirichletChar) -> list[DirichletChar]:
    o = chi.order
    return sorted({chi ** u for u in range(1, o + 1) if math.gcd(u, o) == 1},
                  key=lambda c: c.exponents)


def space_basis(k: int, N: int, p: int, prec: int | None = None,
                character: DirichletChar | None = None, max_generators: int = 5000,
                max_factors: int = 3) -> SpaceBasis:
    """Echelon basis of M_k(Gamma_1(N)) mod p (or of a character sector).

    Forms are spanned one nebentypus orbit at a time: Eisenstein series of
    weight k and products of two (then three) Eisenstein series are added
    greedily, judged on Sturm-bound precision, until the rank reaches the
    dimension formula.  If the reductions stall short of it, integral
    relations are divided by p (needed when p divides the exponent of
    (Z/N)*).  If the candidates (or ``max_generators`` attempts) run out, the
    partial basis is returned with ``spanning_incomplete`` set.
    """
    _validate(k, N, p)
    sturm = sturm_bound(k, N)
    if prec is None:
        prec = default_precision(k, N)
    if prec < sturm + 1:
        raise PrecisionTooLow(f"precision {prec} is below the Sturm bound {sturm} + 1")
    M = group_exponent(N)
    if character is not None:
        if character.modulus != N:
            character = character.lift(N)
        if M % p == 0:
            raise NotComputable("character sectors need p prime to the exponent of (Z/N)*")
        classes = [_galois_orbit(character)] if character.parity == (-1) ** k else []
        total = sum(dimension(k, N, c) for cl in classes for c in cl)
    else:
        classes = _neb_classes(N, p, k)
        total = dimension(k, N)
    short = sturm + 1
    cache = _SeriesCache(M, p, prec)
    units = [u for u in range(1, M + 1) if math.gcd(u, M) == 1]
    seen: set = set()
    blocks: list[_Block] = []
    tried = 0
    for chars in classes:
        target = sum(dimension(k, N, c) for c in chars)
        if target == 0:
            continue
        bl, rank, t = _span_class(k, N, p, chars, target, cache, short, units, seen,
                                  max_generators - tried, max_factors)
        tried += t
        if rank < target:
            log.warning("spanning incomplete for nebentypus orbit %s: rank %d of %d",
                        list(chars[0].exponents), rank, target)
        blocks.extend(bl)
    rows = []
    for b in blocks:
        b.series = [cache.series(g, b.m, prec) for g in b.gens]
        if b.gens:
            rows.append(b.values(np.vstack([s.T for s in b.series]), p))
    U = np.vstack(rows) if rows else np.zeros((0, prec), dtype=np.int64)
    R, piv = linalg.rref(np.hstack([U, np.eye(len(U), dtype=np.int64)]), p, ncols=prec)
    basis = SpaceBasis(k, N, p, prec, None, R[:, :prec], piv, total, tried, blocks,
                       R[:, prec:], M)
    if basis.spanning_incomplete:
        log.warning("spanning incomplete: rank %d of %d for k=%d N=%d p=%d",
                    basis.dimension, total, k, N, p)
    if character is not None:
        basis = _sector(basis, character, dimension(k, N, character))
    return basis


def _sector(basis: SpaceBasis, chi: DirichletChar, expected: int) -> SpaceBasis:
    """The chi-eigenspace of the diamond operators inside ``basis``."""
    p = basis.p
    F = make_field(p)
    if basis.dimension and group_exponent(basis.level) % p == 0:
        raise NotComputable("character sectors need p prime to the exponent of (Z/N)*")
    values = embed_char(chi, F)
    n = basis.dimension
    stack = []
    for g, _ in unit_generators(basis.level):
        D = diamond_matrix(g, basis)
        stack.append((D - int(values[g]) * np.eye(n, dtype=np.int64)) % p)
    if stack and n:
        K = linalg.left_kernel(np.hstack(stack), p)
    else:
        K = np.eye(n, dtype=np.int64)
    V = linalg.matmul_mod(K, basis.matrix, p) if len(K) else np.zeros((0, basis.prec), dtype=np.int64)
    R, piv = linalg.rref(V, p)
    X = linalg.coordinates(R, basis.matrix, basis.pivots, p)
    W = (linalg.matmul_mod(X, basis._transform, p) if len(R)
         else np.zeros((0, basis._transform.shape[1]), dtype=np.int64))
    return SpaceBasis(basis.weight, basis.level, p, basis.prec, chi, R, piv, expected,
                      basis.generators_tried, basis._blocks, W, basis._M)


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

def _apply_to_basis(basis: SpaceBasis, op, out_prec: int) -> np.ndarray:
    """Coordinates of op(basis forms); op maps (block, generator, series) to a series."""
    if basis.dimension == 0:
        return np.zeros((0, 0), dtype=np.int64)
    p = basis.p
    imgs = [b.image(lambda g, s, b=b: op(b, g, s), p) for b in basis._blocks if b.gens]
    images = linalg.matmul_mod(basis._transform, np.vstack(imgs), p)
    return linalg.coordinates(images, basis.matrix[:, :out_prec], basis.pivots, p)


def hecke_matrix(ell: int, basis: SpaceBasis) -> np.ndarray:
    """Matrix of T_ell (U_ell when ell | N) in the echelon basis.

    Row i holds the coordinates of T_ell applied to the i-th basis form.
    Needs basis.prec >= ell * sturm + 1 so images are known to Sturm
    precision; the re-expansion of every image is checked on all available
    coefficients (NotInSpan on failure).
    """
    if not sympy.isprime(ell):
        raise NotPrime(f"{ell} is not prime")
    need = ell * basis.sturm + 1
    if basis.prec < need:
        raise PrecisionTooLow(f"T_{ell} needs precision {need}, basis has {basis.prec}")
    k, N, M = basis.weight, basis.level, basis._M
    out_prec = (basis.prec - 1) // ell + 1

    def op(block: _Block, g: _Generator, s: np.ndarray) -> np.ndarray:
        ring = block.ring
        img = s[::ell][:out_prec].copy()
        w = pow(ell, k - 1, ring.mod)
        if N % ell and w:
            e = int(g.neb.exponent_table(M)[ell % N])
            top = (out_prec - 1) // ell + 1
            img[::ell][:top] = (img[::ell][:top] + w * ring.mul_x(s[:top], e)) % ring.mod
        return img

    return _apply_to_basis(basis, op, out_prec)


def diamond_matrix(d: int, basis: SpaceBasis) -> np.ndarray:
    """Matrix of the diamond operator <d> (d a unit mod N) in the echelon basis."""
    N, M = basis.level, basis._M
    if math.gcd(d, N) != 1:
        raise ValueError(f"{d} is not a unit mod {N}")

    def op(block: _Block, g: _Generator, s: np.ndarray) -> np.ndarray:
        return block.ring.mul_x(s, int(g.neb.exponent_table(M)[d % N]))

    return _apply_to_basis(basis, op, basis.prec)


def apply_hecke(ell: int, f: ModForm) -> ModForm:
    """T_ell on a form with declared character, computed from its q-expansion."""
    if f.character is None:
        raise ValueError("T_ell on a single form needs its character")
    F = f.domain
    if not isinstance(F, FieldDescriptor):
        raise ValueError("expected a form over a finite field")
    p = F.p
    arr = f.expansion.array
    out_prec = (f.prec - 1) // ell + 1
    img = arr[::ell][:out_prec].copy()
    chi = f.character.lift(f.level)
    e = chi.exponent(ell) if f.level % ell else None
    if e is not None:
        c = zeta_power(F, chi.group_exponent, e) * pow(ell, f.weight - 1, p)
        top = (out_prec - 1) // ell + 1
        cc = np.array(c.coeffs, dtype=np.int64)
        img[::ell][:top] = (img[::ell][:top] + fq_mul(F, arr[:top], cc[None, :])) % p
    return ModForm(QExpansion.from_array(img, F), f.weight, f.level, f.character)


# ---------------------------------------------------------------------------
# eigenforms
# ---------------------------------------------------------------------------

@dataclass
class SkippedEigenspace:
    """A joint generalized eigenspace that did not yield a normalized eigenform."""

    reason: str
    dimension: int
    eigenvalues: dict


@dataclass
class EigenDecomposition:
    forms: list[ModForm]
    skipped: list[SkippedEigenspace]


def _split(W: np.ndarray, ops: list[np.ndarray], p: int, i: int = 0,
           factors: tuple = ()) -> Iterator[tuple[np.ndarray, tuple]]:
    """Joint primary decomposition of the row space W under commuting ops."""
    if i == len(ops):
        yield W, factors
        return
    A = linalg.restrict(ops[i], W, p)
    facs = linalg.factor_poly(linalg.charpoly(A, p), p)
    if len(facs) == 1:
        yield from _split(W, ops, p, i + 1, factors + (facs[0][0],))
        return
    for phi, m in facs:
        P = linalg.matrix_power(linalg.poly_of_matrix(phi, A, p), m, p)
        K = linalg.left_kernel(P, p)
        yield from _split(linalg.matmul_mod(K, W, p), ops, p, i + 1, factors + (phi,))


def _root_label(phi: list[int], F2: FieldDescriptor):
    if len(phi) == 2:
        return int((-phi[0]) % F2.p)
    terms = []
    for e in range(len(phi) - 1, -1, -1):
        c = int(phi[e])
        if c == 0:
            continue
        mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
        coef = "" if (c == 1 and e) else str(c)
        terms.append(coef + mono)
    return "roots of " + "+".join(terms)


def _identify_character(N: int, F: FieldDescriptor, values: dict[int, FqElem]) -> DirichletChar | None:
    q = F.order
    for chi in char_group(N):
        if (q - 1) % chi.order:
            continue
        emb = embed_char(chi, F)
        if all(emb[g] == F(values[g]) for g in values):
            return chi
    return None


def eigen_decomposition(basis: SpaceBasis, hecke_primes: Sequence[int], strict: bool = True,
                        allow_unnormalized: bool = False) -> EigenDecomposition:
    """Simultaneous eigenforms of T_ell (ell in hecke_primes) and the diamond operators.

    The commuting family is split over F_p; a joint generalized eigenspace
    yields eigenforms when it is one-dimensional over F_p, or two-dimensional
    with conjugate eigenvalues in F_{p^2} and semisimple action.  Anything
    else is NotDiagonalizable (or reported in ``skipped`` when not strict).
    """
    p, N, k = basis.p, basis.level, basis.weight
    n = basis.dimension
    F1, F2 = make_field(p, 1), make_field(p, 2)
    primes = list(dict.fromkeys(int(l) for l in hecke_primes))
    hecke = [hecke_matrix(l, basis) for l in primes]
    if basis.character is None:
        dgens = [g for g, _ in unit_generators(N)]
        diamonds = [diamond_matrix(g, basis) for g in dgens]
    else:
        dgens, diamonds = [], []
    ops = diamonds + hecke
    labels = [("diamond", g) for g in dgens] + [("T", l) for l in primes]
    forms: list[ModForm] = []
    skipped: list[SkippedEigenspace] = []
    if n == 0:
        return EigenDecomposition(forms, skipped)

    def fail(reason, W, facs):
        ev = {f"{kind}_{x}": _root_label(phi, F2) for (kind, x), phi in zip(labels, facs)}
        if strict:
            raise NotDiagonalizable(f"{reason} (dimension {len(W)}, eigenvalues {ev})",
                                    eigenvalues=ev, dimension=len(W))
        skipped.append(SkippedEigenspace(reason, len(W), ev))

    for W, facs in _split(np.eye(n, dtype=np.int64), ops, p):
        degs = [len(phi) - 1 for phi in facs]
        if any(d > 2 for d in degs):
            fail("eigenvalues outside F_{p^2}", W, facs)
            continue
        restricted = [linalg.restrict(A, W, p) for A in ops]
        if all(d == 1 for d in degs):
            if len(W) != 1:
                fail("repeated eigenvalues", W, facs)
                continue
            vecs = [(np.array([[1]]), F1)]
        else:
            if len(W) != 2:
                fail("repeated eigenvalues", W, facs)
                continue
            i2 = degs.index(2)
            phi = facs[i2]
            roots = quadratic_roots(phi[1], phi[0], F2).roots
            A = restricted[i2]
            vecs = []
            for lam in roots:
                m00, m01 = F2(int(A[0, 0])) - lam, F2(int(A[0, 1]))
                m10, m11 = F2(int(A[1, 0])), F2(int(A[1, 1])) - lam
                c = (m10, -m00) if (m10 or m00) else (m11, -m01)
                vecs.append((np.array([c[0].coeffs, c[1].coeffs]), F2))
        for cvec, F in vecs:
            # semisimplicity / eigenvalue extraction for every operator
            evals = []
            ok = True
            for A in restricted:
                img = np.zeros_like(cvec)
                for j in range(len(W)):
                    for i in range(len(W)):
                        img[j] = (img[j] + cvec[i] * int(A[i, j])) % p
                piv = next(j for j in range(len(W)) if cvec[j].any())
                a = [FqElem(F, [int(x) for x in cvec[j]]) for j in range(len(W))]
                b = [FqElem(F, [int(x) for x in img[j]]) for j in range(len(W))]
                lam = b[piv] / a[piv]
                if any(b[j] != lam * a[j] for j in range(len(W))):
                    ok = False
                    break
                evals.append(lam)
            if not ok:
                fail("operator not semisimple on eigenspace", W, facs)
                continue
            # q-expansion over F: (c @ W) @ basis
            amb = linalg.matmul_mod(W.T, cvec, p)            # (n, k)
            series = linalg.matmul_mod(basis.matrix.T, amb, p)   # (prec, k)
            normalized = True
            lead = FqElem(F, [int(x) for x in series[1]]) if basis.prec > 1 else F.zero
            if not lead:
                if not allow_unnormalized:
                    msg = "eigenform has a_1 = 0 and cannot be normalized"
                    if strict:
                        raise NotNormalizable(msg)
                    skipped.append(SkippedEigenspace(msg, 1, {
                        f"{kind}_{x}": v for (kind, x), v in zip(labels, evals)}))
                    continue
                nz = next(i for i in range(basis.prec) if series[i].any())
                lead = FqElem(F, [int(x) for x in series[nz]])
                normalized = False
            inv = np.array(lead.inverse().coeffs, dtype=np.int64)
            series = fq_mul(F, series, inv[None, :]) if F.k > 1 else series * int(inv[0]) % p
            if basis.character is not None:
                chi = basis.character
            else:
                dvals = {g: evals[i] for i, g in enumerate(dgens)}
                chi = _identify_character(N, F, dvals)
            eig = {l: evals[len(dgens) + i] for i, l in enumerate(primes)}
            forms.append(ModForm(QExpansion.from_array(series, F), k, N, chi, eig, normalized))
    forms.sort(key=lambda f: tuple(f.eigenvalues[l].index for l in primes))
    return EigenDecomposition(forms, skipped)


def eigenforms(basis: SpaceBasis, hecke_primes: Sequence[int], strict: bool = True,
               allow_unnormalized: bool = False) -> list[ModForm]:
    """Normalized simultaneous eigenforms; see :func:`eigen_decomposition`."""
    return eigen_decomposition(basis, hecke_primes, strict, allow_unnormalized).forms


def multiplicativity_failure(f: ModForm, upto: int | None = None) -> tuple | None:
    """First failure of the Hecke relations among a_n, n <= upto, or None.

    Checks c(mn) = c(m)c(n) for coprime m, n and the prime-power recursion
    c(l^{r+1}) = c(l)c(l^r) - chi(l) l^{k-1} c(l^{r-1}).
    """
    F = f.domain
    p = F.p
    upto = min(f.prec - 1, f.sturm if upto is None else upto)
    a = f.expansion.array
    elems = [FqElem(F, [int(x) for x in a[n]]) for n in range(upto + 1)]
    for m in range(2, upto + 1):
        for n in range(m + 1, upto // m + 1):
            if math.gcd(m, n) == 1 and elems[m * n] != elems[m] * elems[n]:
                return ("coprime", m, n)
    chi = f.character.lift(f.level) if f.character is not None else None
    for ell in sympy.primerange(2, upto + 1):
        if f.level % ell == 0:
            w = F.zero
        else:
            if chi is None:
                raise ValueError("prime-power recursion needs the character")
            w = zeta_power(F, chi.group_exponent, chi.exponent(ell)) * pow(ell, f.weight - 1, p)
        r = 1
        while ell ** (r + 1) <= upto:
            lhs = elems[ell ** (r + 1)]
            rhs = elems[ell] * elems[ell ** r] - w * elems[ell ** (r - 1)]
            if lhs != rhs:
                return ("prime_power", ell, r + 1)
            r += 1
    return None
