"""Finite fields F_{p^k} (k <= 4) with scalar and vectorised arithmetic.

Elements are coefficient vectors ``(c_0, ..., c_{k-1})`` over Z/p with respect
to the power basis ``1, x, ..., x^{k-1}`` of ``F_p[x]/(modulus)``.  The modulus
is the first monic irreducible polynomial in the order of the integer encoding
``c_0 + c_1 p + ... + c_{k-1} p^{k-1}`` of its lower coefficients, so golden
files are stable across runs.

The array helpers at the bottom operate on integer arrays whose last axis has
length ``k``; they also accept any monic modulus (not necessarily irreducible)
which is how the spaces module computes in ``F_p[x]/(Phi_M)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence

import numpy as np
from sympy import factorint, isprime

from .errors import DegreeOutOfRange, DivisionByZero, FieldMismatch, NotPrime

MAX_DEGREE = 4


# ----------------------------------------------------------------------------
# dense polynomials over Z/p, lists low-to-high
# ----------------------------------------------------------------------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _pmod(a, f, p):
    """Remainder of ``a`` modulo the polynomial ``f`` (leading coeff a unit)."""
    a = [x % p for x in a]
    f = _trim(f)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    for d in range(len(a) - 1, df - 1, -1):
        t = a[d] * inv_lead % p
        if t:
            for i in range(df + 1):
                a[d - df + i] = (a[d - df + i] - t * f[i]) % p
    return _trim(a[:df])


def _ppowmod(base, e, f, p):
    result = [1]
    base = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over F_p."""
    f = _trim([c % p for c in f])
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if _psub(_ppowmod(x, p**k, f, p), x, p):
        return False
    for r in factorint(k):
        h = _psub(_ppowmod(x, p ** (k // r), f, p), x, p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


def _first_irreducible(p: int, k: int) -> tuple[int, ...]:
    for i in range(p**k):
        low = [(i // p**j) % p for j in range(k)]
        f = low + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# ----------------------------------------------------------------------------
# fields and elements
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldDescriptor:
    """The field ``F_p[x]/(modulus)`` with ``p**k`` elements."""

    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p**self.k

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, value) -> "FqElem":
        return coerce(self, value)

    @property
    def zero(self) -> "FqElem":
        return FqElem(self, (0,) * self.k)

    @property
    def one(self) -> "FqElem":
        return FqElem(self, (1,) + (0,) * (self.k - 1))

    @property
    def gen(self) -> "FqElem":
        """The class of ``x``; for ``k == 1`` this is 0."""
        if self.k == 1:
            return self.zero
        return FqElem(self, (0, 1) + (0,) * (self.k - 2))

    def element(self, index: int) -> "FqElem":
        """Inverse of :attr:`FqElem.index`."""
        if not 0 <= index < self.order:
            raise ValueError(f"index {index} out of range for F_{self.p}^{self.k}")
        return FqElem(self, tuple((index // self.p**j) % self.p for j in range(self.k)))

    def elements(self) -> Iterator["FqElem"]:
        for i in range(self.order):
            yield self.element(i)

    def all_elements_array(self) -> np.ndarray:
        """Every element as an ``(order, k)`` array, in index order."""
        idx = np.arange(self.order, dtype=np.int64)
        return np.stack([(idx // self.p**j) % self.p for j in range(self.k)], axis=-1)

    @property
    def prime_subfield(self) -> "FieldDescriptor":
        return make_field(self.p, 1)

    def contains(self, other: "FieldDescriptor") -> bool:
        return other.p == self.p and self.k % other.k == 0

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data: dict) -> "FieldDescriptor":
        field = make_field(int(data["p"]), int(data["k"]))
        if "modulus" in data and tuple(data["modulus"]) != field.modulus:
            raise FieldMismatch(f"unexpected modulus {data['modulus']} for F_{field.p}^{field.k}")
        return field

    def __repr__(self) -> str:
        if self.k == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.k}"


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FieldDescriptor:
    """Return the field with ``p**k`` elements (``1 <= k <= 4``)."""
    p, k = int(p), int(k)
    if p < 2 or not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1 or k > MAX_DEGREE:
        raise DegreeOutOfRange(f"extension degree must satisfy 1 <= k <= {MAX_DEGREE}, got {k}")
    return FieldDescriptor(p, k, _first_irreducible(p, k))


def _mulmod(a, b, modulus, p):
    k = len(modulus) - 1
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for d in range(2 * k - 2, k - 1, -1):
        t = prod[d] % p
        if t:
            for i in range(k):
                prod[d - k + i] -= t * modulus[i]
    return tuple(c % p for c in prod[:k])


class FqElem:
    """An immutable element of a :class:`FieldDescriptor`."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldDescriptor, coeffs: Sequence[int]):
        coeffs = tuple(int(c) % field.p for c in coeffs)
        if len(coeffs) != field.k:
            raise ValueError(f"expected {field.k} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("FqElem is immutable")

    def __reduce__(self):
        return (FqElem, (self.field, self.coeffs))

    # coercion -------------------------------------------------------------
    def _other(self, other):
        if isinstance(other, FqElem):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, (int, np.integer)):
            return coerce(self.field, int(other))
        return NotImplemented

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return FqElem(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return FqElem(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return FqElem(self.field, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        f = self.field
        if f.k == 1:
            return FqElem(f, (self.coeffs[0] * other.coeffs[0],))
        return FqElem(f, _mulmod(self.coeffs, other.coeffs, f.modulus, f.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        e = int(e)
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FqElem":
        if self.is_zero():
            raise DivisionByZero(f"0 has no inverse in {self.field!r}")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def frobenius(self, times: int = 1) -> "FqElem":
        """``x -> x**(p**times)``."""
        return self ** (self.field.p ** (times % self.field.k))

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def in_prime_field(self) -> bool:
        return not any(self.coeffs[1:])

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise DivisionByZero("0 has no multiplicative order")
        n = self.field.order - 1
        order = n
        for r, e in factorint(n).items():
            for _ in range(e):
                if (self ** (order // r)) == 1:
                    order //= r
                else:
                    break
        return order

    @property
    def index(self) -> int:
        p = self.field.p
        return sum(c * p**j for j, c in enumerate(self.coeffs))

    def __int__(self) -> int:
        if not self.in_prime_field():
            raise ValueError(f"{self!r} is not in the prime field")
        return self.coeffs[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, FqElem):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, np.integer)):
            return self.coeffs == coerce(self.field, int(other)).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __repr__(self) -> str:
        if self.field.k == 1:
            return str(self.coeffs[0])
        return "[" + ", ".join(map(str, self.coeffs)) + "]"


def coerce(field: FieldDescriptor, value) -> FqElem:
    """Interpret ``value`` (int, coefficient list, or element of a subfield)."""
    if isinstance(value, FqElem):
        if value.field == field:
            return value
        return embed(value, field)
    if isinstance(value, (int, np.integer)):
        return FqElem(field, (int(value),) + (0,) * (field.k - 1))
    if isinstance(value, (list, tuple, np.ndarray)):
        return FqElem(field, [int(c) for c in value])
    raise TypeError(f"cannot coerce {type(value).__name__} into {field!r}")


@lru_cache(maxsize=None)
def _generator_image(source: FieldDescriptor, target: FieldDescriptor) -> FqElem:
    # smallest-index root in target of the defining polynomial of source
    elems = target.all_elements_array()
    acc = np.zeros_like(elems)
    acc[:, 0] = 1  # leading coefficient of the monic modulus
    for c in reversed(source.modulus[:-1]):
        acc = fq_mul(target, acc, elems)
        acc[:, 0] = (acc[:, 0] + c) % target.p
    roots = np.nonzero(~acc.any(axis=1))[0]
    return target.element(int(roots[0]))


def embed(elem: FqElem, target: FieldDescriptor) -> FqElem:
    """Map ``elem`` into ``target`` along the canonical embedding."""
    source = elem.field
    if source == target:
        return elem
    if not target.contains(source):
        raise FieldMismatch(f"{source!r} does not embed in {target!r}")
    if source.k == 1:
        return coerce(target, elem.coeffs[0])
    theta = _generator_image(source, target)
    out, power = target.zero, target.one
    for c in elem.coeffs:
        out = out + power * c
        power = power * theta
    return out


def common_field(*fields: FieldDescriptor) -> FieldDescriptor:
    """Smallest of the given fields containing all the others."""
    best = max(fields, key=lambda f: f.k)
    for f in fields:
        if not best.contains(f):
            raise FieldMismatch(f"no common field among {fields}")
    return best


# ----------------------------------------------------------------------------
# square roots and quadratic equations
# ----------------------------------------------------------------------------

def is_square(a: FqElem) -> bool:
    if a.is_zero() or a.field.p == 2:
        return True
    return a ** ((a.field.order - 1) // 2) == 1


def sqrt(a: FqElem) -> FqElem | None:
    """A square root of ``a`` (Tonelli-Shanks), or None if there is none."""
    field = a.field
    if a.is_zero():
        return field.zero
    q = field.order
    if field.p == 2:
        return a ** (q // 2)
    if not is_square(a):
        return None
    s, t = 0, q - 1
    while t % 2 == 0:
        s, t = s + 1, t // 2
    z = next(z for z in (field.element(i) for i in range(1, q)) if not is_square(z))
    m, c, r, u = s, z**t, a ** ((t + 1) // 2), a**t
    while u != 1:
        i, u2 = 0, u
        while u2 != 1:
            u2, i = u2 * u2, i + 1
        b = c ** (2 ** (m - i - 1))
        m, c, r, u = i, b * b, r * b, u * b * b
    return r


class QuadraticRoots(NamedTuple):
    roots: tuple
    distinct: bool


def quadratic_roots(a1, a0, target: FieldDescriptor) -> QuadraticRoots:
    """Roots of ``x^2 + a1 x + a0`` lying in ``target``, with multiplicity.

    ``distinct`` reports whether the polynomial is separable, i.e. whether
    its two roots (wherever they lie) differ.
    """
    base_fields = [v.field for v in (a1, a0) if isinstance(v, FqElem)]
    base = base_fields[0] if base_fields else target.prime_subfield
    for f in base_fields:
        if f != base:
            raise FieldMismatch("coefficients lie in different fields")
    if not target.contains(base) or target.k // base.k not in (1, 2):
        raise FieldMismatch(f"{target!r} is not of degree 1 or 2 over {base!r}")
    b, c = coerce(target, a1), coerce(target, a0)
    if target.p == 2:
        roots = [x for x in target.elements() if (x * x + b * x + c).is_zero()]
        distinct = not b.is_zero()
        if len(roots) == 1:
            roots = roots * 2
        return QuadraticRoots(tuple(roots), distinct)
    disc = b * b - c * 4
    r = sqrt(disc)
    if r is None:
        return QuadraticRoots((), True)
    half = target(2).inverse()
    roots = sorted([(-b + r) * half, (-b - r) * half], key=lambda e: e.index)
    return QuadraticRoots(tuple(roots), not disc.is_zero())


# ----------------------------------------------------------------------------
# vectorised arithmetic; arrays have a trailing axis of length k
# ----------------------------------------------------------------------------

def reduce_poly_array(p: int, modulus: Sequence[int], c: np.ndarray) -> np.ndarray:
    """Reduce polynomial coefficient arrays ``(..., L)`` modulo a monic modulus."""
    k = len(modulus) - 1
    c = np.array(c, dtype=np.int64) % p
    L = c.shape[-1]
    if L <= k:
        pad = [(0, 0)] * (c.ndim - 1) + [(0, k - L)]
        return np.pad(c, pad)
    m = np.asarray(modulus[:k], dtype=np.int64)
    for d in range(L - 1, k - 1, -1):
        t = c[..., d : d + 1]
        c[..., d - k : d] = (c[..., d - k : d] - t * m) % p
    return c[..., :k]


def poly_mul_array(p: int, modulus: Sequence[int], a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise product in ``F_p[x]/(modulus)`` of broadcastable arrays."""
    k = len(modulus) - 1
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if k == 1:
        return (a * b) % p
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    out = np.zeros(shape + (2 * k - 1,), dtype=np.int64)
    for i in range(k):
        ai = a[..., i]
        for j in range(k):
            out[..., i + j] = (out[..., i + j] + ai * b[..., j]) % p
    return reduce_poly_array(p, modulus, out)


def fq_mul(field: FieldDescriptor, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if field.k == 1:
        return np.multiply(a, b, dtype=np.int64) % field.p
    return poly_mul_array(field.p, field.modulus, a, b)


@lru_cache(maxsize=None)
def _frobenius_matrix(field: FieldDescriptor) -> np.ndarray:
    rows = []
    for j in range(field.k):
        basis = [0] * field.k
        basis[j] = 1
        rows.append(FqElem(field, basis).frobenius().coeffs)
    return np.array(rows, dtype=np.int64)


def fq_frobenius(field: FieldDescriptor, a: np.ndarray) -> np.ndarray:
    """Apply ``x -> x**p`` to every element of an array."""
    a = np.asarray(a, dtype=np.int64)
    if field.k == 1:
        return a % field.p
    return (a @ _frobenius_matrix(field)) % field.p


def fq_embed_array(a: np.ndarray, source: FieldDescriptor, target: FieldDescriptor) -> np.ndarray:
    """Embed an array of ``source`` elements into ``target``."""
    a = np.asarray(a, dtype=np.int64)
    if source == target:
        return a
    images = np.array([embed(FqElem(source, e), target).coeffs for e in np.eye(source.k, dtype=int)],
                      dtype=np.int64)
    return (a @ images) % target.p


def to_array(elems: Sequence[FqElem], field: FieldDescriptor) -> np.ndarray:
    if len(elems) == 0:
        return np.zeros((0, field.k), dtype=np.int64)
    return np.array([coerce(field, e).coeffs for e in elems], dtype=np.int64)


def from_array(a: np.ndarray, field: FieldDescriptor) -> list[FqElem]:
    a = np.asarray(a).reshape(-1, field.k)
    return [FqElem(field, row) for row in a]
