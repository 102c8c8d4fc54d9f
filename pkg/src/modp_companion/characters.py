"""Dirichlet characters mod N with exact cyclotomic values.

A character is stored by its exponent vector on a fixed set of generators of
(Z/N)*: if the generators g_1, ..., g_r have orders o_1, ..., o_r, then the
character with exponents (e_1, ..., e_r) sends g_i to exp(2 pi i e_i / o_i).
Nothing is ever evaluated as a float.  Values are reported either as
exponents of a root of unity zeta_M (M = exponent of the unit group) or,
on demand, as elements of a finite field via :func:`embed_char`.

Generators are chosen deterministically through the Chinese remainder
theorem: the smallest primitive root for each odd prime power, and -1, 5 for
a power of two.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
import sympy
from sympy.ntheory import factorint, primitive_root

from .errors import NoEmbedding
from .ffield import FieldDescriptor, FqElem


# ---------------------------------------------------------------------------
# unit group structure
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def unit_generators(N: int) -> tuple[tuple[int, int], ...]:
    """Generators of (Z/N)* as ``(residue, order)`` pairs, one per cyclic factor."""
    if N < 1:
        raise ValueError("modulus must be positive")
    gens = []
    for ell, e in sorted(factorint(N).items()):
        q = ell**e
        rest = N // q

        def lift(g):
            # x = g mod q, x = 1 mod rest
            if rest == 1:
                return g % N
            return (g * rest * pow(rest, -1, q) + q * pow(q, -1, rest)) % N

        if ell == 2:
            if e == 2:
                gens.append((lift(-1), 2))
            elif e >= 3:
                gens.append((lift(-1), 2))
                gens.append((lift(5), 2 ** (e - 2)))
        else:
            gens.append((lift(primitive_root(q)), (ell - 1) * ell ** (e - 1)))
    return tuple(gens)


@lru_cache(maxsize=None)
def group_exponent(N: int) -> int:
    """Exponent of (Z/N)* (1 for N <= 2)."""
    return math.lcm(1, *(o for _, o in unit_generators(N)))


@lru_cache(maxsize=None)
def _dlog_table(N: int) -> np.ndarray:
    """Array ``(N, r)`` of discrete logs on the generators; -1 on non-units."""
    gens = unit_generators(N)
    table = np.full((N, len(gens)), -1, dtype=np.int64)
    if N == 1:
        return np.zeros((1, 0), dtype=np.int64)
    for exps in itertools.product(*(range(o) for _, o in gens)):
        x = 1
        for (g, _), e in zip(gens, exps):
            x = x * pow(g, e, N) % N
        table[x] = exps
    table.setflags(write=False)
    return table


def discrete_log(a: int, N: int) -> tuple[int, ...] | None:
    """Exponent vector of ``a`` on the standard generators, or None for non-units."""
    if math.gcd(a, N) != 1:
        return None
    row = _dlog_table(N)[a % N]
    return tuple(int(x) for x in row)


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

class DirichletChar:
    """A Dirichlet character mod ``modulus`` given by generator exponents."""

    __slots__ = ("modulus", "exponents", "_orders")

    def __init__(self, modulus: int, exponents: Sequence[int] = ()):
        if modulus < 1:
            raise ValueError("modulus must be positive")
        gens = unit_generators(modulus)
        exponents = tuple(int(e) for e in exponents) if exponents else (0,) * len(gens)
        if len(exponents) != len(gens):
            raise ValueError(f"expected {len(gens)} generator exponents for modulus {modulus}")
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "_orders", tuple(o for _, o in gens))
        object.__setattr__(self, "exponents", tuple(e % o for e, o in zip(exponents, self._orders)))

    def __setattr__(self, name, value):
        raise AttributeError("DirichletChar is immutable")

    def __reduce__(self):
        return (DirichletChar, (self.modulus, self.exponents))

    # -- structure ---------------------------------------------------------
    @classmethod
    def trivial(cls, N: int = 1) -> "DirichletChar":
        return cls(N)

    @property
    def generators(self) -> tuple[tuple[int, int], ...]:
        return unit_generators(self.modulus)

    @property
    def group_exponent(self) -> int:
        return group_exponent(self.modulus)

    @property
    def order(self) -> int:
        return math.lcm(1, *(o // math.gcd(o, e) for e, o in zip(self.exponents, self._orders)))

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def exponent(self, a: int) -> int | None:
        """chi(a) = zeta_M^exponent(a) with M the group exponent; None if not a unit."""
        log = discrete_log(a, self.modulus)
        if log is None:
            return None
        M = self.group_exponent
        return sum(e * l * (M // o) for e, l, o in zip(self.exponents, log, self._orders)) % M

    def exponent_table(self, M: int | None = None) -> np.ndarray:
        """Exponents of chi(a) for a = 0..N-1 relative to zeta_M (-1 marks non-units).

        ``M`` may be any multiple of the order of chi (default: the group exponent).
        """
        Mg = self.group_exponent
        M = Mg if M is None else M
        if M % self.order:
            raise ValueError(f"{M} is not a multiple of the character order {self.order}")
        table = _dlog_table(self.modulus)
        if self.modulus == 1:
            return np.zeros(1, dtype=np.int64)
        w = np.array([e * (Mg // o) for e, o in zip(self.exponents, self._orders)], dtype=np.int64)
        out = (table @ w) % Mg
        # values are Mg/order-multiples, so the rescaling is exact
        out = out * M // Mg
        out[np.gcd(np.arange(self.modulus), self.modulus) != 1] = -1
        return out

    @property
    def parity(self) -> int:
        """chi(-1) as +1 (even) or -1 (odd)."""
        e = self.exponent(-1)
        return 1 if e == 0 else -1

    def is_even(self) -> bool:
        return self.parity == 1

    # -- group operations --------------------------------------------------
    def __mul__(self, other: "DirichletChar") -> "DirichletChar":
        if other.modulus != self.modulus:
            N = math.lcm(self.modulus, other.modulus)
            return self.lift(N) * other.lift(N)
        return DirichletChar(self.modulus, [a + b for a, b in zip(self.exponents, other.exponents)])

    def __pow__(self, n: int) -> "DirichletChar":
        return DirichletChar(self.modulus, [n * e for e in self.exponents])

    def inverse(self) -> "DirichletChar":
        return self ** -1

    def __eq__(self, other) -> bool:
        return (isinstance(other, DirichletChar) and self.modulus == other.modulus
                and self.exponents == other.exponents)

    def __hash__(self) -> int:
        return hash((self.modulus, self.exponents))

    def __repr__(self) -> str:
        return f"DirichletChar(modulus={self.modulus}, exponents={list(self.exponents)}, order={self.order})"

    # -- moduli ----------------------------------------------------------------
    def lift(self, N: int) -> "DirichletChar":
        """The induced character mod a multiple N of the modulus."""
        if N % self.modulus:
            raise ValueError(f"{N} is not a multiple of {self.modulus}")
        if N == self.modulus:
            return self
        M, Mn = self.group_exponent, group_exponent(N)
        exps = []
        for g, o in unit_generators(N):
            E = self.exponent(g)  # relative to zeta_M; rescale to zeta_Mn
            E = E * (Mn // M)
            exps.append((E * o // Mn) % o)
        return DirichletChar(N, exps)

    @property
    def conductor(self) -> int:
        N = self.modulus
        table = self.exponent_table()
        for d in sympy.divisors(N):
            ok = True
            for a in range(1 + d, N, d):
                if table[a] > 0:
                    ok = False
                    break
            if ok:
                return d
        return N

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def primitive(self) -> "DirichletChar":
        """The primitive character inducing this one."""
        f = self.conductor
        if f == self.modulus:
            return self
        N = self.modulus
        M = self.group_exponent
        exps = []
        for h, o in unit_generators(f):
            a = h
            while math.gcd(a, N) != 1:
                a += f
            E = self.exponent(a)
            # chi(a) is an o-th root of unity: E * o = 0 mod M
            exps.append((E * o // M) % o)
        return DirichletChar(f, exps)

    def galois_conjugate(self, u: int) -> "DirichletChar":
        """chi^u for u prime to the order."""
        return self ** u

    # -- serialization -------------------------------------------------------
    def to_json(self) -> dict:
        return {"modulus": self.modulus, "order": self.order,
                "generator_exponents": list(self.exponents)}

    @classmethod
    def from_json(cls, data: dict) -> "DirichletChar":
        chi = cls(int(data["modulus"]), data["generator_exponents"])
        if "order" in data and int(data["order"]) != chi.order:
            raise ValueError("order field does not match the exponents")
        return chi


def char_group(N: int) -> list[DirichletChar]:
    """All characters mod N, ordered lexicographically by exponent vector."""
    if N < 1:
        raise ValueError("N must be >= 1")
    orders = [o for _, o in unit_generators(N)]
    return [DirichletChar(N, exps) for exps in itertools.product(*(range(o) for o in orders))]


def kronecker_symbol(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    result = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * int(sympy.jacobi_symbol(D % n, n))


def kronecker_character(D: int) -> DirichletChar:
    """The quadratic character a -> (D/a) mod |D| for a fundamental discriminant D."""
    N = abs(D)
    exps = []
    for g, o in unit_generators(N):
        s = kronecker_symbol(D, g)
        exps.append(0 if s == 1 else o // 2)
    chi = DirichletChar(N, exps)
    for a in range(1, N):
        if math.gcd(a, N) == 1:
            if (chi.exponent(a) == 0) != (kronecker_symbol(D, a) == 1):
                raise ValueError(f"{D} is not a fundamental discriminant")
    return chi


# ---------------------------------------------------------------------------
# cyclotomic numbers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_modulus(m: int) -> tuple[int, ...]:
    """Coefficients of the cyclotomic polynomial Phi_m, low degree first."""
    x = sympy.Symbol("x")
    coeffs = sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


@lru_cache(maxsize=None)
def power_reduction(m: int) -> np.ndarray:
    """Integer matrix whose row e holds the coordinates of zeta_m^e in the power basis."""
    phi = cyclotomic_modulus(m)
    d = len(phi) - 1
    rows = np.zeros((m, d), dtype=object)
    cur = [0] * d
    cur[0] = 1
    for e in range(m):
        rows[e] = cur
        # multiply by x and reduce
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * phi[i] for i, c in enumerate(cur)]
    out = rows.astype(np.int64) if all(abs(int(v)) < 2**62 for v in rows.flat) else rows
    out.setflags(write=False)
    return out


class Cyclotomic:
    """An element of Q(zeta_m) in power-basis coordinates (exact Fractions)."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: Sequence):
        self.m = m
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    @classmethod
    def from_exponent_sum(cls, m: int, terms: dict[int, Fraction]) -> "Cyclotomic":
        """Sum of ``c * zeta_m^e`` over ``terms = {e: c}``."""
        R = power_reduction(m)
        acc = [Fraction(0)] * R.shape[1]
        for e, c in terms.items():
            if c:
                for i, r in enumerate(R[e % m]):
                    if r:
                        acc[i] += c * int(r)
        return cls(m, acc)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.coeffs[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, Cyclotomic):
            return self.m == other.m and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        return hash((self.m, self.coeffs))

    def __repr__(self) -> str:
        terms = [f"{c}*z^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs) if c]
        return f"Cyclotomic(m={self.m}: {' + '.join(terms) or '0'})"


# ---------------------------------------------------------------------------
# generalized Bernoulli numbers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """B_n with the convention B_1 = -1/2."""
    if n == 1:
        return Fraction(-1, 2)
    b = sympy.bernoulli(n)
    return Fraction(int(b.p), int(b.q))


@lru_cache(maxsize=None)
def bernoulli_poly_coeffs(k: int) -> tuple[Fraction, ...]:
    """Coefficients of B_k(x) = sum_j C(k, j) B_j x^(k-j), low degree first."""
    out = [Fraction(0)] * (k + 1)
    for j in range(k + 1):
        out[k - j] = math.comb(k, j) * bernoulli_number(j)
    return tuple(out)


def _bernoulli_terms(k: int, chi: DirichletChar, M: int) -> dict[int, Fraction]:
    """B_{k,chi} as {exponent of zeta_M: rational coefficient}."""
    f = chi.modulus
    table = chi.exponent_table(M)
    poly = bernoulli_poly_coeffs(k)
    terms: dict[int, Fraction] = {}
    for a in range(f):
        e = int(table[a])
        if e < 0:
            continue
        x = Fraction(a, f)
        val = sum(c * x**i for i, c in enumerate(poly))
        terms[e] = terms.get(e, Fraction(0)) + val
    scale = Fraction(f) ** (k - 1)
    return {e: c * scale for e, c in terms.items()}


def gen_bernoulli_vector(k: int, chi: DirichletChar, M: int | None = None) -> Cyclotomic:
    """B_{k,chi} as an element of Q(zeta_M); ``M`` defaults to the order of chi."""
    M = chi.order if M is None else M
    return Cyclotomic.from_exponent_sum(M, _bernoulli_terms(k, chi, M))


def gen_bernoulli(k: int, chi: DirichletChar) -> Fraction | Cyclotomic:
    """Generalized Bernoulli number B_{k,chi} from the finite sum over residues.

    B_{k,chi} = f^(k-1) * sum_{a=0}^{f-1} chi(a) B_k(a/f), f the modulus of chi.
    Rational values are returned as a Fraction; otherwise the result lives in
    Q(zeta_m) with m the order of chi.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    val = gen_bernoulli_vector(k, chi)
    return val.rational() if val.is_rational() else val


# ---------------------------------------------------------------------------
# finite-field embeddings
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def root_of_unity(field: FieldDescriptor, L: int) -> FqElem:
    """Smallest-index element of exact multiplicative order L in the field."""
    q = field.order
    if (q - 1) % L:
        raise NoEmbedding(f"F_{q} has no element of order {L}")
    if L == 1:
        return field.one
    for idx in range(1, q):
        x = field.element(idx)
        if x.multiplicative_order() == L:
            return x
    raise NoEmbedding(f"no element of order {L} found in F_{q}")  # pragma: no cover


def zeta_power(field: FieldDescriptor, M: int, E: int) -> FqElem:
    """Image of zeta_M^E under the canonical embedding of mu_M into the field.

    zeta_M is sent to the canonical root of order L = gcd(M, q - 1); this is
    only well defined when the value zeta_M^E has order dividing q - 1.
    """
    q = field.order
    L = math.gcd(M, q - 1)
    if (E * L) % M:
        raise NoEmbedding(f"zeta_{M}^{E} has order not dividing {q - 1}")
    return root_of_unity(field, L) ** ((E * L // M) % L)


def embed_char(chi: DirichletChar, field: FieldDescriptor) -> dict[int, FqElem]:
    """Values of chi on (Z/N)* as field elements, keyed by residue."""
    q = field.order
    if (q - 1) % chi.order:
        raise NoEmbedding(f"character of order {chi.order} does not embed in F_{q}")
    M = chi.group_exponent
    table = chi.exponent_table()
    return {a: zeta_power(field, M, int(table[a])) for a in range(chi.modulus) if table[a] >= 0}


def embed_char_array(chi: DirichletChar, field: FieldDescriptor, M: int | None = None) -> np.ndarray:
    """Array ``(N, k)`` of chi(a) coordinates for a = 0..N-1 (zeros on non-units)."""
    Mg = chi.group_exponent if M is None else M
    q = field.order
    if (q - 1) % chi.order:
        raise NoEmbedding(f"character of order {chi.order} does not embed in F_{q}")
    table = chi.exponent_table(Mg)
    out = np.zeros((chi.modulus, field.k), dtype=np.int64)
    cache: dict[int, np.ndarray] = {}
    for a in range(chi.modulus):
        e = int(table[a])
        if e < 0:
            continue
        if e not in cache:
            cache[e] = np.array(zeta_power(field, Mg, e).coeffs, dtype=np.int64)
        out[a] = cache[e]
    return out
