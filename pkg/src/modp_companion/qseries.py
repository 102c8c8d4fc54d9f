"""Truncated q-expansions over Q, Z/p^m or F_{p^k}.

A :class:`QExpansion` is known modulo ``q**prec``.  Every operation returns a
result whose precision is what the inputs actually determine; nothing is
padded or extrapolated.  Equality between series is a three-valued judgement
(:func:`compare`) that always states the precision at which it was made.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np
from sympy import factorint

from .errors import CharacteristicMismatch, DomainMismatch, NotPIntegral
from .ffield import (
    FieldDescriptor,
    FqElem,
    coerce,
    fq_embed_array,
    fq_frobenius,
    fq_mul,
    make_field,
    reduce_poly_array,
)

# Tunable crossover points of the multiplication engine.
SCHOOLBOOK_THRESHOLD = 256
FFT_THRESHOLD = 512
# FFT products are used only while every exact coefficient stays below this.
FFT_EXACT_LIMIT = 2.0**44


# ----------------------------------------------------------------------------
# coefficient domains
# ----------------------------------------------------------------------------

class RationalField:
    """Exact rationals (``fractions.Fraction``)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    characteristic = 0

    def to_json(self) -> dict:
        return {"type": "QQ"}

    def __repr__(self) -> str:
        return "QQ"

    def __reduce__(self):
        return (RationalField, ())


QQ = RationalField()


@dataclass(frozen=True)
class IntegersMod:
    """The ring Z/p^m."""

    p: int
    m: int = 1

    @property
    def modulus(self) -> int:
        return self.p**self.m

    @property
    def characteristic(self) -> int:
        return self.modulus

    def to_json(self) -> dict:
        return {"type": "Zmod", "p": self.p, "m": self.m}

    def __repr__(self) -> str:
        return f"Z/{self.p}^{self.m}" if self.m > 1 else f"Z/{self.p}"


Domain = RationalField | IntegersMod | FieldDescriptor


def domain_to_json(domain: Domain) -> dict:
    if isinstance(domain, FieldDescriptor):
        return {"type": "Fq", **domain.to_json()}
    return domain.to_json()


def domain_from_json(data: dict) -> Domain:
    kind = data["type"]
    if kind == "QQ":
        return QQ
    if kind == "Zmod":
        return IntegersMod(int(data["p"]), int(data["m"]))
    if kind == "Fq":
        return FieldDescriptor.from_json(data)
    raise ValueError(f"unknown domain type {kind!r}")


def characteristic(domain: Domain) -> int:
    return domain.characteristic


# ----------------------------------------------------------------------------
# multiplication engine on integer arrays modulo m
# ----------------------------------------------------------------------------

def _school(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    if min(len(a), len(b)) * (m - 1) ** 2 < 2**62:
        return np.convolve(a, b) % m
    wide = np.convolve(a.astype(object), b.astype(object))
    return np.array([int(x) % m for x in wide], dtype=np.int64)


def _karatsuba(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    n = max(len(a), len(b))
    if min(len(a), len(b)) <= SCHOOLBOOK_THRESHOLD:
        return _school(a, b, m)
    if len(a) < n:
        a = np.pad(a, (0, n - len(a)))
    if len(b) < n:
        b = np.pad(b, (0, n - len(b)))
    h = n // 2
    a0, a1, b0, b1 = a[:h], a[h:], b[:h], b[h:]
    z0 = _karatsuba(a0, b0, m)
    z2 = _karatsuba(a1, b1, m)
    sa = a1.copy()
    sa[:h] = (sa[:h] + a0) % m
    sb = b1.copy()
    sb[:h] = (sb[:h] + b0) % m
    z1 = _karatsuba(sa, sb, m)
    z1[: len(z0)] -= z0
    z1[: len(z2)] -= z2
    out = np.zeros(2 * n - 1, dtype=np.int64)
    out[: len(z0)] += z0
    out[h : h + len(z1)] += z1
    out[2 * h : 2 * h + len(z2)] += z2
    return out % m


def _fft_ok(la: int, lb: int, m: int) -> bool:
    return min(la, lb) * float(m - 1) ** 2 < FFT_EXACT_LIMIT


def _fft(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    size = len(a) + len(b) - 1
    nfft = 1 << (size - 1).bit_length()
    fa = np.fft.rfft(a.astype(np.float64), nfft)
    fb = np.fft.rfft(b.astype(np.float64), nfft)
    prod = np.fft.irfft(fa * fb, nfft)[:size]
    return np.rint(prod).astype(np.int64) % m


def conv_mod(a: np.ndarray, b: np.ndarray, m: int, n: int | None = None) -> np.ndarray:
    """Product of two polynomials with coefficients mod ``m``, truncated to ``n`` terms."""
    a = np.asarray(a, dtype=np.int64) % m
    b = np.asarray(b, dtype=np.int64) % m
    if n is not None:
        a, b = a[:n], b[:n]
    if len(a) == 0 or len(b) == 0:
        return np.zeros(n or 0, dtype=np.int64)
    short = min(len(a), len(b))
    if short <= SCHOOLBOOK_THRESHOLD:
        out = _school(a, b, m)
    elif short >= FFT_THRESHOLD and _fft_ok(len(a), len(b), m):
        out = _fft(a, b, m)
    else:
        out = _karatsuba(a, b, m)
    if n is not None:
        out = out[:n]
        if len(out) < n:
            out = np.pad(out, (0, n - len(out)))
    return out


def algebra_mul(a: np.ndarray, b: np.ndarray, p: int, modulus: Sequence[int], n: int) -> np.ndarray:
    """Truncated product of series with coefficients in ``F_p[x]/(modulus)``.

    ``a`` and ``b`` have shape ``(len, k)``; the result has shape ``(n, k)``.
    """
    k = len(modulus) - 1
    a = np.asarray(a, dtype=np.int64)[:n] % p
    b = np.asarray(b, dtype=np.int64)[:n] % p
    if k == 1:
        return conv_mod(a[:, 0], b[:, 0], p, n)[:, None]
    width = 2 * k - 1
    la, lb = len(a), len(b)
    if min(la, lb) >= FFT_THRESHOLD // width and _fft_ok(la * k, lb * k, p):
        # Kronecker substitution: one long FFT product
        pa = np.zeros((la, width), dtype=np.int64)
        pa[:, :k] = a
        pb = np.zeros((lb, width), dtype=np.int64)
        pb[:, :k] = b
        flat = _fft(pa.ravel(), pb.ravel(), p)
        flat = np.pad(flat, (0, (la + lb) * width - len(flat)))
        wide = flat.reshape(la + lb, width)[:n]
    else:
        wide = np.zeros((n, width), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                wide[:, i + j] += conv_mod(a[:, i], b[:, j], p, n)
        wide %= p
    if len(wide) < n:
        wide = np.pad(wide, ((0, n - len(wide)), (0, 0)))
    return reduce_poly_array(p, modulus, wide)


# ----------------------------------------------------------------------------
# the series type
# ----------------------------------------------------------------------------

def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    arr.flags.writeable = False
    return arr


class QExpansion:
    """A truncated series ``sum a_n q^n + O(q^prec)``.

    Coefficients are stored as a tuple of ``Fraction`` over QQ, an ``(prec,)``
    integer array over Z/p^m, and an ``(prec, k)`` integer array over F_{p^k}.
    """

    __slots__ = ("_data", "prec", "domain")

    def __init__(self, coeffs, prec: int | None = None, domain: Domain = QQ):
        if prec is None:
            prec = len(coeffs)
        prec = int(prec)
        if prec < 0:
            raise ValueError("precision must be non-negative")
        self.prec = prec
        self.domain = domain
        if domain is QQ:
            vals = [Fraction(c) for c in list(coeffs)[:prec]]
            vals += [Fraction(0)] * (prec - len(vals))
            self._data = tuple(vals)
        elif isinstance(domain, IntegersMod):
            if domain.modulus >= 2**31:
                raise ValueError("Z/p^m coefficients limited to moduli below 2^31")
            arr = np.array([int(c) for c in list(coeffs)[:prec]], dtype=np.int64).reshape(-1)
            arr = np.pad(arr % domain.modulus, (0, prec - len(arr)))
            self._data = _frozen(arr)
        elif isinstance(domain, FieldDescriptor):
            if isinstance(coeffs, np.ndarray) and coeffs.ndim == 2:
                arr = coeffs[:prec]
            else:
                arr = np.array([coerce(domain, c).coeffs for c in list(coeffs)[:prec]],
                               dtype=np.int64).reshape(-1, domain.k)
            arr = np.asarray(arr, dtype=np.int64) % domain.p
            arr = np.pad(arr, ((0, prec - len(arr)), (0, 0)))
            self._data = _frozen(arr)
        else:
            raise DomainMismatch(f"unsupported domain {domain!r}")

    # construction helpers ---------------------------------------------------
    @classmethod
    def _raw(cls, data, prec: int, domain: Domain) -> "QExpansion":
        obj = object.__new__(cls)
        obj.prec = prec
        obj.domain = domain
        obj._data = tuple(data) if domain is QQ else _frozen(data)
        return obj

    @classmethod
    def zero(cls, prec: int, domain: Domain = QQ) -> "QExpansion":
        return cls([], prec, domain)

    @classmethod
    def one(cls, prec: int, domain: Domain = QQ) -> "QExpansion":
        return cls([1], prec, domain)

    @classmethod
    def from_array(cls, arr: np.ndarray, domain: Domain) -> "QExpansion":
        arr = np.asarray(arr, dtype=np.int64)
        if isinstance(domain, FieldDescriptor):
            return cls._raw(arr.reshape(-1, domain.k) % domain.p, len(arr), domain)
        if isinstance(domain, IntegersMod):
            return cls._raw(arr % domain.modulus, len(arr), domain)
        return cls([int(x) for x in arr], len(arr), QQ)

    # access -------------------------------------------------------------------
    @property
    def array(self) -> np.ndarray:
        """Read-only integer coefficient array (finite domains only)."""
        if self.domain is QQ:
            raise DomainMismatch("rational series have no integer array")
        return self._data

    def __getitem__(self, n):
        if isinstance(n, slice):
            raise TypeError("use truncate() or coefficients() instead of slicing")
        n = int(n)
        if not 0 <= n < self.prec:
            raise IndexError(f"coefficient {n} not known (precision {self.prec})")
        if self.domain is QQ:
            return self._data[n]
        if isinstance(self.domain, IntegersMod):
            return int(self._data[n])
        return FqElem(self.domain, self._data[n])

    def coefficients(self) -> list:
        return [self[n] for n in range(self.prec)]

    def support(self) -> list[int]:
        if self.domain is QQ:
            return [n for n, c in enumerate(self._data) if c]
        data = self._data if self._data.ndim == 1 else self._data.any(axis=1)
        return [int(n) for n in np.nonzero(data)[0]]

    def is_zero(self) -> bool:
        return not self.support()

    def valuation(self) -> int | None:
        s = self.support()
        return s[0] if s else None

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "QExpansion"):
        if not isinstance(other, QExpansion):
            raise TypeError(f"expected QExpansion, got {type(other).__name__}")
        if other.domain != self.domain:
            raise DomainMismatch(f"{self.domain!r} vs {other.domain!r}")

    def __add__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return qx_add(self, other)

    def __sub__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return qx_add(self, qx_scale(other, -1))

    def __neg__(self):
        return qx_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            return qx_mul(self, other)
        return qx_scale(self, other)

    def __rmul__(self, other):
        return qx_scale(self, other)

    def __pow__(self, e: int):
        result = QExpansion.one(self.prec, self.domain)
        base = self
        e = int(e)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def truncate(self, prec: int) -> "QExpansion":
        prec = min(int(prec), self.prec)
        return QExpansion._raw(self._data[:prec], prec, self.domain)

    def frobenius(self) -> "QExpansion":
        """Raise every coefficient to the p-th power (fields only)."""
        if not isinstance(self.domain, FieldDescriptor):
            raise CharacteristicMismatch("frobenius needs a finite field domain")
        return QExpansion._raw(fq_frobenius(self.domain, self._data), self.prec, self.domain)

    def change_domain(self, target: Domain) -> "QExpansion":
        """Reduce or embed coefficients into ``target``.

        QQ reduces to Z/p^m or F_{p^k} (rejecting denominators divisible by
        p); Z/p^m reduces to F_p-fields; a field embeds in any extension.
        """
        src = self.domain
        if src == target:
            return self
        if src is QQ:
            if target is QQ:
                return self
            p = target.p
            m = target.modulus if isinstance(target, IntegersMod) else p
            vals = []
            for n, c in enumerate(self._data):
                if c.denominator % p == 0:
                    raise NotPIntegral(f"coefficient {n} = {c} is not {p}-integral")
                vals.append(c.numerator * pow(c.denominator, -1, m) % m)
            if isinstance(target, IntegersMod):
                return QExpansion._raw(np.array(vals, dtype=np.int64), self.prec, target)
            arr = np.zeros((self.prec, target.k), dtype=np.int64)
            arr[:, 0] = vals
            return QExpansion._raw(arr, self.prec, target)
        if isinstance(src, IntegersMod) and isinstance(target, (IntegersMod, FieldDescriptor)):
            if target.p != src.p or (isinstance(target, IntegersMod) and target.m > src.m):
                raise DomainMismatch(f"cannot map {src!r} to {target!r}")
            if isinstance(target, IntegersMod):
                return QExpansion._raw(self._data % target.modulus, self.prec, target)
            arr = np.zeros((self.prec, target.k), dtype=np.int64)
            arr[:, 0] = self._data % target.p
            return QExpansion._raw(arr, self.prec, target)
        if isinstance(src, FieldDescriptor) and isinstance(target, FieldDescriptor):
            return QExpansion._raw(fq_embed_array(self._data, src, target), self.prec, target)
        raise DomainMismatch(f"cannot map {src!r} to {target!r}")

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        """Structural identity: same domain, precision and coefficients."""
        if not isinstance(other, QExpansion):
            return NotImplemented
        if self.domain != other.domain or self.prec != other.prec:
            return False
        if self.domain is QQ:
            return self._data == other._data
        return bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def compare(self, other: "QExpansion", prec: int | None = None) -> "Comparison":
        return compare(self, other, prec)

    # serialisation --------------------------------------------------------
    def _coeff_json(self, n: int):
        c = self[n]
        if self.domain is QQ:
            return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        if isinstance(c, FqElem):
            return c.to_json()
        return c

    def to_json(self) -> dict:
        return {
            "domain": domain_to_json(self.domain),
            "prec": self.prec,
            "coeffs": [self._coeff_json(n) for n in range(self.prec)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QExpansion":
        domain = domain_from_json(data["domain"])
        coeffs = data["coeffs"]
        if domain is QQ:
            coeffs = [Fraction(c) for c in coeffs]
        return cls(coeffs, int(data["prec"]), domain)

    def to_text(self) -> str:
        terms = []
        for n in self.support():
            c = self[n]
            if isinstance(c, FqElem):
                body = repr(c)
            else:
                body = str(c)
            mono = "" if n == 0 else ("*q" if n == 1 else f"*q^{n}")
            terms.append(body + mono)
        terms.append(f"O(q^{self.prec})")
        return " + ".join(terms)

    @classmethod
    def from_text(cls, text: str, domain: Domain = QQ) -> "QExpansion":
        """Parse the output of :meth:`to_text`."""
        m = re.search(r"O\(q\^(\d+)\)\s*$", text.strip())
        if not m:
            raise ValueError("missing O(q^prec) term")
        prec = int(m.group(1))
        body = text.strip()[: m.start()].strip()
        coeffs: list = [0] * prec
        if body:
            term_re = re.compile(r"(\[[^\]]*\]|[-\d/]+)(?:\*q(?:\^(\d+))?)?")
            for part in body.rstrip("+ ").split(" + "):
                tm = term_re.fullmatch(part.strip())
                if not tm:
                    raise ValueError(f"cannot parse term {part!r}")
                coeff_s, exp_s = tm.group(1), tm.group(2)
                n = 0 if "*q" not in part else (int(exp_s) if exp_s else 1)
                if coeff_s.startswith("["):
                    coeffs[n] = [int(x) for x in coeff_s[1:-1].split(",")]
                else:
                    coeffs[n] = Fraction(coeff_s)
        if domain is not QQ:
            coeffs = [c if isinstance(c, list) else int(c) for c in coeffs]
        return cls(coeffs, prec, domain)

    def __repr__(self) -> str:
        text = self.truncate(min(self.prec, 8)).to_text()
        if self.prec > 8:
            text = text.rsplit(" + O(", 1)[0] + f" + ... + O(q^{self.prec})"
        return f"QExpansion[{self.domain!r}]({text})"


# ----------------------------------------------------------------------------
# ring operations
# ----------------------------------------------------------------------------

def qx_add(f: QExpansion, g: QExpansion) -> QExpansion:
    f._check(g)
    n = min(f.prec, g.prec)
    if f.domain is QQ:
        return QExpansion._raw([a + b for a, b in zip(f._data[:n], g._data[:n])], n, QQ)
    mod = f.domain.modulus if isinstance(f.domain, IntegersMod) else f.domain.p
    return QExpansion._raw((f._data[:n] + g._data[:n]) % mod, n, f.domain)


def qx_scale(f: QExpansion, c) -> QExpansion:
    """Multiply every coefficient by the scalar ``c``."""
    dom = f.domain
    if dom is QQ:
        c = Fraction(c)
        return QExpansion._raw([c * a for a in f._data], f.prec, QQ)
    if isinstance(dom, IntegersMod):
        if isinstance(c, Fraction):
            c = c.numerator * pow(c.denominator, -1, dom.modulus)
        return QExpansion._raw((f._data * (int(c) % dom.modulus)) % dom.modulus, f.prec, dom)
    if isinstance(c, Fraction):
        c = coerce(dom, c.numerator) / c.denominator
    c = coerce(dom, c)
    return QExpansion._raw(fq_mul(dom, f._data, np.array(c.coeffs)), f.prec, dom)


def qx_mul(f: QExpansion, g: QExpansion) -> QExpansion:
    """Cauchy product truncated at ``min(f.prec, g.prec)``."""
    f._check(g)
    n = min(f.prec, g.prec)
    dom = f.domain
    if dom is QQ:
        a, b = f._data[:n], g._data[:n]
        out = [Fraction(0)] * n
        nz = [(i, x) for i, x in enumerate(a) if x]
        for j, y in enumerate(b):
            if y:
                for i, x in nz:
                    if i + j >= n:
                        break
                    out[i + j] += x * y
        return QExpansion._raw(out, n, QQ)
    if isinstance(dom, IntegersMod):
        return QExpansion._raw(conv_mod(f._data, g._data, dom.modulus, n), n, dom)
    return QExpansion._raw(algebra_mul(f._data, g._data, dom.p, dom.modulus, n), n, dom)


# ----------------------------------------------------------------------------
# operators
# ----------------------------------------------------------------------------

def op_U(ell: int, f: QExpansion) -> QExpansion:
    """``sum a_n q^n -> sum a_{n*ell} q^n``."""
    ell = int(ell)
    if ell < 2:
        raise ValueError("U_ell needs ell >= 2")
    prec = (f.prec - 1) // ell + 1 if f.prec else 0
    if f.domain is QQ:
        return QExpansion._raw(f._data[::ell][:prec], prec, QQ)
    return QExpansion._raw(f._data[::ell][:prec], prec, f.domain)


def op_B(d: int, f: QExpansion) -> QExpansion:
    """``f(q) -> f(q^d)`` over any domain."""
    d = int(d)
    if d < 1:
        raise ValueError("B_d needs d >= 1")
    prec = d * (f.prec - 1) + 1 if f.prec else 0
    if f.domain is QQ:
        out = [Fraction(0)] * prec
        out[::d] = f._data
        return QExpansion._raw(out, prec, QQ)
    shape = (prec,) + f._data.shape[1:]
    out = np.zeros(shape, dtype=np.int64)
    out[::d] = f._data
    return QExpansion._raw(out, prec, f.domain)


def op_V(f: QExpansion, p: int, linear: bool = False) -> QExpansion:
    """Frobenius operator on a characteristic-p series.

    By default ``a_{pn}(V f) = a_n(f)**p``.  With ``linear=True`` the
    coefficients are left alone (``q -> q^p`` only), which is the pull-back
    along the relative Frobenius of a curve defined over F_p.
    """
    p = int(p)
    dom = f.domain
    char = dom.characteristic
    if char != p:
        raise CharacteristicMismatch(f"domain {dom!r} does not have characteristic {p}")
    if isinstance(dom, FieldDescriptor) and not linear:
        f = f.frobenius()
    return op_B(p, f)


def op_theta(f: QExpansion) -> QExpansion:
    """``q d/dq``: ``a_n -> n a_n``."""
    dom = f.domain
    if dom is QQ:
        return QExpansion._raw([n * c for n, c in enumerate(f._data)], f.prec, QQ)
    n = np.arange(f.prec, dtype=np.int64)
    if isinstance(dom, IntegersMod):
        return QExpansion._raw((f._data * n) % dom.modulus, f.prec, dom)
    return QExpansion._raw((f._data * (n % dom.p)[:, None]) % dom.p, f.prec, dom)


def gamma1_index(N: int) -> int:
    """``[SL_2(Z) : Gamma_1(N)] = N^2 prod_{l | N} (1 - 1/l^2)``."""
    N = int(N)
    idx = N * N
    for ell in factorint(N):
        idx = idx // (ell * ell) * (ell * ell - 1)
    return idx


def sturm_bound(k: int, N: int) -> int:
    """``ceil(k * [SL_2(Z):Gamma_1(N)] / 12)``."""
    k, N = int(k), int(N)
    if k < 1 or N < 1:
        raise ValueError("sturm_bound needs k >= 1 and N >= 1")
    return -(-k * gamma1_index(N) // 12)


# ----------------------------------------------------------------------------
# three-valued equality
# ----------------------------------------------------------------------------

class Verdict(Enum):
    EQUAL = "equal"
    UNEQUAL = "unequal"
    INSUFFICIENT = "insufficient-precision"


@dataclass(frozen=True)
class Comparison:
    verdict: Verdict
    prec: int
    first_difference: int | None = None

    @property
    def equal(self) -> bool:
        return self.verdict is Verdict.EQUAL

    def __bool__(self):
        raise TypeError("Comparison is three-valued; inspect .verdict or .equal")


def compare(f: QExpansion, g: QExpansion, prec: int | None = None) -> Comparison:
    """Compare ``f`` and ``g`` modulo ``q**prec`` (default: the common precision)."""
    f._check(g)
    avail = min(f.prec, g.prec)
    if prec is None:
        prec = avail
    if prec > avail:
        return Comparison(Verdict.INSUFFICIENT, avail)
    if f.domain is QQ:
        for n in range(prec):
            if f._data[n] != g._data[n]:
                return Comparison(Verdict.UNEQUAL, prec, n)
        return Comparison(Verdict.EQUAL, prec)
    diff = f._data[:prec] != g._data[:prec]
    if diff.ndim == 2:
        diff = diff.any(axis=1)
    bad = np.nonzero(diff)[0]
    if len(bad):
        return Comparison(Verdict.UNEQUAL, prec, int(bad[0]))
    return Comparison(Verdict.EQUAL, prec)


def series_from_function(fn, prec: int, domain: Domain = QQ) -> QExpansion:
    """Build a series from ``fn(n)`` for ``0 <= n < prec``."""
    return QExpansion([fn(n) for n in range(prec)], prec, domain)


def prime_field(p: int) -> FieldDescriptor:
    return make_field(p, 1)


__all__ = [
    "QQ", "RationalField", "IntegersMod", "QExpansion", "Comparison", "Verdict",
    "qx_add", "qx_scale", "qx_mul", "op_U", "op_B", "op_V", "op_theta",
    "sturm_bound", "gamma1_index", "compare", "conv_mod", "algebra_mul",
    "domain_to_json", "domain_from_json", "prime_field", "series_from_function",
]
