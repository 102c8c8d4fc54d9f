"""Ideal-indexed eigensystems: the coefficient model of Hilbert eigenforms.

A totally real field is represented only through its ideals: a free
commutative monoid on labelled primes, each with a norm.  The primes above p
form the distinguished set S, and (p) is their product.  A normalized
eigenform is modelled by its eigenvalue system c(m), determined by the
values at primes through multiplicativity and the Hecke recursion

    c(l^(r+1)) = c(l) c(l^r) - chi(l) Nl^(k-1) c(l^(r-1)).

At l in S the term Nl^(k-1) vanishes mod p (k >= 2), so c(l^r) = c(l)^r.

Coefficients of many ideals at once are computed as arrays: an ideal table
stores exponent vectors row by row, and a system's coefficients are products
of per-prime power tables (field elements as trailing axes of length k, as
in :mod:`modp_companion.ffield`).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
import sympy

from .errors import NotDistinguished, UnknownPrime
from .ffield import FieldDescriptor, FqElem, coerce, fq_mul, make_field

SYNTHETIC_OTHER_PRIMES = 25


# ---------------------------------------------------------------------------
# primes, ideals and the monoid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeIdeal:
    label: str
    norm: int
    in_S: bool = False


@dataclass(frozen=True, order=True)
class Ideal:
    """An integral ideal as a multiset of prime labels: ((label, exponent), ...)."""

    factors: tuple[tuple[str, int], ...] = ()

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "Ideal":
        counts: dict[str, int] = {}
        for lab in labels:
            counts[lab] = counts.get(lab, 0) + 1
        return cls(tuple(sorted(counts.items())))

    @classmethod
    def from_dict(cls, exps: Mapping[str, int]) -> "Ideal":
        return cls(tuple(sorted((l, int(e)) for l, e in exps.items() if e)))

    @property
    def exponents(self) -> dict[str, int]:
        return dict(self.factors)

    def labels(self) -> list[str]:
        return [l for l, e in self.factors for _ in range(e)]

    def is_unit(self) -> bool:
        return not self.factors

    def __mul__(self, other: "Ideal") -> "Ideal":
        e = self.exponents
        for l, k in other.factors:
            e[l] = e.get(l, 0) + k
        return Ideal.from_dict(e)

    def divides(self, other: "Ideal") -> bool:
        o = other.exponents
        return all(o.get(l, 0) >= e for l, e in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "(1)"
        return "*".join(l if e == 1 else f"{l}^{e}" for l, e in self.factors)


UNIT_IDEAL = Ideal()


@dataclass
class IdealTable:
    """Ideals as rows of an exponent matrix, in canonical order (norm, exponents)."""

    monoid: "IdealMonoid"
    exps: np.ndarray       # (n_ideals, n_primes)
    norms: np.ndarray      # (n_ideals,)
    bound: int | None = None

    def columns(self) -> tuple[np.ndarray, list[np.ndarray]]:
        """Exponents prime by prime (contiguous), with the rows where each is nonzero."""
        if self.bound is not None:
            return _column_data(tuple(q.norm for q in self.monoid.primes), self.bound)
        return _columns_of(self.exps)

    def __len__(self) -> int:
        return len(self.norms)

    def ideal(self, i: int) -> Ideal:
        return self.monoid.ideal_from_vector(self.exps[i])

    def ideals(self) -> list[Ideal]:
        return [self.ideal(i) for i in range(len(self))]

    def divisible_by(self, J: Ideal) -> np.ndarray:
        v = self.monoid.vector(J)
        return (self.exps >= v[None, :]).all(axis=1)

    def times(self, J: Ideal) -> np.ndarray:
        """Exponent rows of m*J for every m in the table."""
        return self.exps + self.monoid.vector(J)[None, :]


def _columns_of(exps: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    cols = np.ascontiguousarray(exps.T)
    cols.setflags(write=False)
    return cols, [np.flatnonzero(c) for c in cols]


@lru_cache(maxsize=16)
def _column_data(norms: tuple[int, ...], bound: int) -> tuple[np.ndarray, list[np.ndarray]]:
    return _columns_of(_enumerate_ideals(norms, bound)[0])


@lru_cache(maxsize=64)
def _enumerate_ideals(norms: tuple[int, ...], bound: int) -> tuple[np.ndarray, np.ndarray]:
    """Exponent vectors with prod norms^e <= bound, sorted by (norm, exponents)."""
    m = len(norms)
    exps = np.zeros((1 if bound >= 1 else 0, m), dtype=np.int64)
    out = np.ones(len(exps), dtype=np.int64)
    for i, q in enumerate(norms):
        parts_e, parts_n = [exps], [out]
        cur_e, cur_n = exps, out
        while True:
            keep = cur_n <= bound // q
            if not keep.any():
                break
            cur_e = cur_e[keep].copy()
            cur_e[:, i] += 1
            cur_n = cur_n[keep] * q
            parts_e.append(cur_e)
            parts_n.append(cur_n)
        exps, out = np.concatenate(parts_e), np.concatenate(parts_n)
    # lexsort: the last key is primary
    order = np.lexsort(tuple(exps[:, j] for j in range(m - 1, -1, -1)) + (out,))
    exps, out = np.ascontiguousarray(exps[order]), out[order]
    exps.setflags(write=False)
    out.setflags(write=False)
    return exps, out


class IdealMonoid:
    """Free commutative monoid on labelled primes; S are the primes above p."""

    def __init__(self, primes: Sequence[PrimeIdeal], p: int):
        if not sympy.isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = int(p)
        self.primes = tuple(primes)
        labels = [q.label for q in self.primes]
        if len(set(labels)) != len(labels):
            raise ValueError("prime labels must be distinct")
        self.index = {l: i for i, l in enumerate(labels)}
        for q in self.primes:
            fac = sympy.factorint(q.norm)
            if q.norm < 2 or len(fac) != 1:
                raise ValueError(f"norm of {q.label} must be a prime power, got {q.norm}")
            (ell, _), = fac.items()
            if (ell == self.p) != q.in_S:
                raise ValueError(f"{q.label}: primes above p are exactly those of p-power norm")
        if not any(q.in_S for q in self.primes):
            raise ValueError("S (the primes above p) must be nonempty")

    @property
    def S(self) -> list[PrimeIdeal]:
        return [q for q in self.primes if q.in_S]

    @property
    def degree(self) -> int:
        """d = sum of residue degrees f_v over v in S, since N(v) = p^(f_v)."""
        return sum(int(sympy.multiplicity(self.p, q.norm)) for q in self.S)

    @cached_property
    def norms(self) -> np.ndarray:
        return np.array([q.norm for q in self.primes], dtype=np.int64)

    @cached_property
    def S_mask(self) -> np.ndarray:
        return np.array([q.in_S for q in self.primes])

    @property
    def p_ideal(self) -> Ideal:
        """(p) as the product of the primes in S (p unramified)."""
        return Ideal.from_labels(q.label for q in self.S)

    def prime(self, label: str) -> PrimeIdeal:
        try:
            return self.primes[self.index[label]]
        except KeyError:
            raise UnknownPrime(f"unknown prime {label!r}") from None

    def vector(self, I: Ideal) -> np.ndarray:
        v = np.zeros(len(self.primes), dtype=np.int64)
        for l, e in I.factors:
            if l not in self.index:
                raise UnknownPrime(f"unknown prime {l!r}")
            v[self.index[l]] = e
        return v

    def ideal_from_vector(self, v) -> Ideal:
        return Ideal(tuple(sorted((self.primes[i].label, int(e)) for i, e in enumerate(v) if e)))

    def norm(self, I: Ideal) -> int:
        return int(np.prod([self.prime(l).norm ** e for l, e in I.factors], dtype=object)) if I.factors else 1

    def ideal(self, *labels: str) -> Ideal:
        for l in labels:
            self.prime(l)
        return Ideal.from_labels(labels)

    def ideals_up_to(self, bound: int) -> IdealTable:
        """Every ideal of norm <= bound."""
        return self._table(int(bound))

    def _table(self, bound: int) -> IdealTable:
        exps, norms = _enumerate_ideals(tuple(q.norm for q in self.primes), bound)
        return IdealTable(self, exps, norms, bound)

    def to_json(self) -> list[dict]:
        return [{"label": q.label, "norm": q.norm, "in_S": q.in_S} for q in self.primes]

    @classmethod
    def from_json(cls, primes: Sequence[Mapping], p: int) -> "IdealMonoid":
        return cls([PrimeIdeal(str(q["label"]), int(q["norm"]), bool(q["in_S"])) for q in primes], p)

    def __eq__(self, other) -> bool:
        return isinstance(other, IdealMonoid) and self.p == other.p and self.primes == other.primes

    def __hash__(self) -> int:
        return hash((self.p, self.primes))

    def __repr__(self) -> str:
        return f"IdealMonoid(p={self.p}, |S|={len(self.S)}, primes={len(self.primes)})"


def synthetic_monoid(n: int, p: int, others: int = SYNTHETIC_OTHER_PRIMES) -> IdealMonoid:
    """A totally split model: n primes v1..vn of norm p, then ``others`` primes of
    the smallest norms ell != p, each rational prime contributing n primes."""
    if n < 1:
        raise ValueError("n must be >= 1")
    primes = [PrimeIdeal(f"v{i}", p, True) for i in range(1, n + 1)]
    ell = 1
    count = 0
    while count < others:
        ell = int(sympy.nextprime(ell))
        if ell == p:
            continue
        for i in range(1, n + 1):
            if count == others:
                break
            primes.append(PrimeIdeal(f"l{ell}" if n == 1 else f"l{ell}.{i}", ell))
            count += 1
    return IdealMonoid(primes, p)


@lru_cache(maxsize=64)
def classical_monoid(p: int, bound: int) -> IdealMonoid:
    """Q itself: one prime per rational prime ell <= bound (label str(ell)); S = {p}."""
    primes = [PrimeIdeal(str(ell), ell, ell == p) for ell in sympy.primerange(2, max(bound, p) + 1)]
    return IdealMonoid(primes, p)


# ---------------------------------------------------------------------------
# eigensystems
# ---------------------------------------------------------------------------

def _elem(field: FieldDescriptor, v) -> FqElem:
    return coerce(field, v)


class EigenSystem:
    """A normalized eigenvalue system c on the ideals of ``monoid``.

    ``eigenvalues`` maps prime labels to c(l); primes of S may be left out
    for data "away from S" (see :func:`companion_family`).  ``character``
    maps labels to chi(l) (default 1).  Instances are immutable; prime-power
    tables are memoized, which does not change any result.
    """

    def __init__(self, monoid: IdealMonoid, weight: int, eigenvalues: Mapping[str, object],
                 field: FieldDescriptor | None = None, character: Mapping[str, object] | None = None,
                 provenance: str | None = None):
        if field is None:
            field = make_field(monoid.p)
        if field.p != monoid.p:
            raise ValueError("coefficient field must have characteristic p")
        self.monoid = monoid
        self.weight = int(weight)
        self.field = field
        self.provenance = provenance
        ev = {}
        for l, v in eigenvalues.items():
            monoid.prime(l)
            ev[l] = _elem(field, v)
        missing = [q.label for q in monoid.primes if not q.in_S and q.label not in ev]
        if missing:
            raise UnknownPrime(f"no eigenvalue at {missing[0]!r}")
        ch = {}
        for l, v in (character or {}).items():
            monoid.prime(l)
            ch[l] = _elem(field, v)
            if not ch[l]:
                raise ValueError(f"character value at {l} must be a unit")
        self._ev = ev
        self._chi = ch
        self._tables: dict[tuple[int, int], np.ndarray] = {}

    @property
    def eigenvalues(self) -> dict[str, FqElem]:
        return dict(self._ev)

    @property
    def character(self) -> dict[str, FqElem]:
        return {q.label: self._chi.get(q.label, self.field.one) for q in self.monoid.primes}

    def eigenvalue(self, label: str) -> FqElem:
        self.monoid.prime(label)
        if label not in self._ev:
            raise UnknownPrime(f"no eigenvalue stored at {label!r}")
        return self._ev[label]

    def chi(self, label: str) -> FqElem:
        self.monoid.prime(label)
        return self._chi.get(label, self.field.one)

    @cached_property
    def outside_key(self) -> tuple:
        """Eigenvalues and character values at every prime outside S, for quick comparison."""
        return tuple((self._ev[q.label].coeffs, self._chi.get(q.label, self.field.one).coeffs)
                     for q in self.monoid.primes if not q.in_S)

    def with_eigenvalues(self, updates: Mapping[str, object], provenance: str | None = None) -> "EigenSystem":
        ev = dict(self._ev)
        ev.update(updates)
        return EigenSystem(self.monoid, self.weight, ev, self.field, self._chi,
                           provenance if provenance is not None else self.provenance)

    def prime_power_table(self, i: int, rmax: int) -> np.ndarray:
        """Array (rmax+1, k) of c(l^r) for the i-th prime, r = 0..rmax."""
        key = (i, rmax)
        if key in self._tables:
            return self._tables[key]
        q = self.monoid.primes[i]
        F = self.field
        out = np.zeros((rmax + 1, F.k), dtype=np.int64)
        out[0, 0] = 1
        if rmax >= 1 and F.k == 1:
            a = self.eigenvalue(q.label).coeffs[0]
            w = self.chi(q.label).coeffs[0] * pow(q.norm, self.weight - 1, F.p) % F.p
            vals = [1, a]
            for r in range(1, rmax):
                vals.append((a * vals[r] - w * vals[r - 1]) % F.p)
            out[:, 0] = vals
        elif rmax >= 1:
            a = np.array(self.eigenvalue(q.label).coeffs, dtype=np.int64)
            w = self.chi(q.label) * pow(q.norm, self.weight - 1, F.p)
            wv = np.array(w.coeffs, dtype=np.int64)
            out[1] = a
            for r in range(1, rmax):
                out[r + 1] = (fq_mul(F, a, out[r]) - fq_mul(F, wv, out[r - 1])) % F.p
        out.setflags(write=False)
        self._tables[key] = out
        return out

    def coefficients(self, exps: np.ndarray, primes: Sequence[int] | None = None) -> np.ndarray:
        """c(m) for every exponent row of ``exps`` as an (n, k) array.

        With ``primes`` only those prime positions contribute (a partial product).
        """
        F = self.field
        exps = np.atleast_2d(np.asarray(exps, dtype=np.int64))
        out = np.zeros((len(exps), F.k), dtype=np.int64)
        out[:, 0] = 1
        idx = range(exps.shape[1]) if primes is None else primes
        cols = np.ascontiguousarray(exps.T)
        for i in idx:
            col = cols[i]
            rows = np.flatnonzero(col)
            if not rows.size:
                continue
            r = col[rows]
            out[rows] = fq_mul(F, out[rows], self.prime_power_table(i, int(r.max()))[r])
        return out

    def c(self, m: Ideal) -> FqElem:
        return FqElem(self.field, self.coefficients(self.monoid.vector(m)[None, :])[0])

    def q_expansion(self, prec: int):
        """For the classical monoid: sum_{n>=1} c(n) q^n (c(0) = 0) as a QExpansion."""
        from .qseries import QExpansion
        exps = _integer_exponents(self.monoid, prec)
        arr = np.zeros((prec, self.field.k), dtype=np.int64)
        if prec > 1:
            arr[1:] = self.coefficients(exps[1:])
        return QExpansion.from_array(arr, self.field)

    def to_json(self) -> dict:
        out = {
            "primes": self.monoid.to_json(),
            "weight": self.weight,
            "p": self.monoid.p,
            "field": self.field.to_json(),
            "eigenvalues": {l: list(v.coeffs) for l, v in sorted(self._ev.items(), key=lambda t: self.monoid.index[t[0]])},
        }
        if self._chi:
            out["character"] = {l: list(v.coeffs) for l, v in self._chi.items()}
        if self.provenance is not None:
            out["provenance"] = self.provenance
        return out

    @classmethod
    def from_json(cls, data: Mapping, monoid: IdealMonoid | None = None) -> "EigenSystem":
        p = int(data["p"])
        if monoid is None:
            monoid = IdealMonoid.from_json(data["primes"], p)
        F = FieldDescriptor.from_json(data["field"])
        ev = {l: FqElem(F, v) for l, v in data["eigenvalues"].items()}
        ch = {l: FqElem(F, v) for l, v in data.get("character", {}).items()}
        return cls(monoid, int(data["weight"]), ev, F, ch, data.get("provenance"))

    def __repr__(self) -> str:
        return f"EigenSystem(k={self.weight}, {self.field!r}, {self.monoid!r})"


def _integer_exponents(monoid: IdealMonoid, prec: int) -> np.ndarray:
    """Exponent rows of the integers 0..prec-1 (row 0 unused) in a classical monoid."""
    cache = monoid.__dict__.setdefault("_integer_exponents", {})
    if prec in cache:
        return cache[prec]
    exps = np.zeros((prec, len(monoid.primes)), dtype=np.int64)
    for i, q in enumerate(monoid.primes):
        ell = q.norm
        if not sympy.isprime(ell):
            raise ValueError("q-expansions need the classical monoid (one prime per rational prime)")
        pk = ell
        while pk < prec:
            exps[pk::pk, i] += 1
            pk *= ell
    n = np.arange(prec)
    rebuilt = np.prod(np.where(exps > 0, monoid.norms[None, :] ** exps, 1), axis=1)
    if prec > 1 and (rebuilt[1:] != n[1:]).any():
        raise ValueError("the monoid lacks primes below the requested precision")
    exps.setflags(write=False)
    cache[prec] = exps
    return exps


def extend_coefficients(system: EigenSystem, m: Ideal) -> FqElem:
    """c(m) from the values at primes (multiplicativity plus the Hecke recursion)."""
    return system.c(m)


# ---------------------------------------------------------------------------
# companion families
# ---------------------------------------------------------------------------

@dataclass
class CompanionFamily:
    """The 2^n systems f_I, I ranging over subsets of S (as frozensets of labels)."""

    monoid: IdealMonoid
    gammas: dict[str, tuple[FqElem, FqElem]]
    subsets: list[frozenset]
    systems: list[EigenSystem]
    shared: EigenSystem | None = dc_field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.systems)

    def __iter__(self) -> Iterator[EigenSystem]:
        return iter(self.systems)

    def __getitem__(self, I) -> EigenSystem:
        if isinstance(I, int):
            return self.systems[I]
        return self.systems[self.subsets.index(frozenset(I))]

    def items(self) -> list[tuple[frozenset, EigenSystem]]:
        return list(zip(self.subsets, self.systems))

    def to_json(self) -> dict:
        return {
            "p": self.monoid.p,
            "primes": self.monoid.to_json(),
            "gammas": {v: [list(a.coeffs), list(b.coeffs)] for v, (a, b) in self.gammas.items()},
            "shared": None if self.shared is None else self.shared.to_json(),
            "members": [{"I": sorted(I), "system": s.to_json()} for I, s in self.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CompanionFamily":
        monoid = IdealMonoid.from_json(data["primes"], int(data["p"]))
        members = data["members"]
        systems = [EigenSystem.from_json(m["system"], monoid) for m in members]
        F = systems[0].field if systems else make_field(monoid.p)
        gammas = {v: (FqElem(F, a), FqElem(F, b)) for v, (a, b) in data["gammas"].items()}
        shared = data.get("shared")
        return cls(monoid, gammas, [frozenset(m["I"]) for m in members], systems,
                   None if shared is None else EigenSystem.from_json(shared, monoid))


def subsets_of(labels: Sequence[str]) -> list[frozenset]:
    """All subsets in canonical order: by size, then lexicographically."""
    out = []
    for r in range(len(labels) + 1):
        out.extend(frozenset(c) for c in itertools.combinations(labels, r))
    return out


def companion_family(shared: EigenSystem, gammas: Mapping[str, tuple]) -> CompanionFamily:
    """Systems f_I with c(v) = gamma_{v,1} for v in I and gamma_{v,2} for v in S - I."""
    monoid = shared.monoid
    F = shared.field
    S = [q.label for q in monoid.S]
    if set(gammas) != set(S):
        missing = sorted(set(S) - set(gammas)) or sorted(set(gammas) - set(S))
        raise UnknownPrime(f"gammas must be given exactly on S; offending label {missing[0]!r}")
    gam = {}
    for v in S:
        g1, g2 = (_elem(F, x) for x in gammas[v])
        if g1 == g2:
            raise NotDistinguished(f"gamma_{{{v},1}} = gamma_{{{v},2}} = {g1}: eigenvalues at {v} are not distinct")
        gam[v] = (g1, g2)
    subsets = subsets_of(S)
    systems = []
    for I in subsets:
        upd = {v: gam[v][0] if v in I else gam[v][1] for v in S}
        prov = f"I={{{','.join(sorted(I))}}}"
        systems.append(shared.with_eigenvalues(upd, provenance=prov))
    return CompanionFamily(monoid, gam, subsets, systems, shared)


def random_system(monoid: IdealMonoid, field: FieldDescriptor, rng: np.random.Generator,
                  weight: int | None = None, with_character: bool = True) -> EigenSystem:
    """Seeded random eigenvalues at primes outside S (values at S left unset)."""
    k = monoid.p if weight is None else weight
    elems = field.all_elements_array()
    ev, ch = {}, {}
    for q in monoid.primes:
        if not q.in_S:
            ev[q.label] = FqElem(field, elems[rng.integers(field.order)])
        if with_character:
            ch[q.label] = FqElem(field, elems[1 + rng.integers(field.order - 1)])
    return EigenSystem(monoid, k, ev, field, ch, provenance="synthetic")


def random_gammas(monoid: IdealMonoid, field: FieldDescriptor, rng: np.random.Generator) -> dict:
    """Distinct nonzero pairs (gamma_{v,1}, gamma_{v,2}) for every v in S."""
    elems = field.all_elements_array()
    out = {}
    for q in monoid.S:
        i, j = rng.choice(field.order - 1, size=2, replace=False) + 1
        out[q.label] = (FqElem(field, elems[i]), FqElem(field, elems[j]))
    return out


def synthetic_family(n: int, p: int, seed: int | np.random.Generator, field_degree: int = 1,
                     others: int = SYNTHETIC_OTHER_PRIMES) -> CompanionFamily:
    """A reproducible random companion family with |S| = n over F_{p^field_degree}."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    monoid = synthetic_monoid(n, p, others)
    F = make_field(p, field_degree)
    shared = random_system(monoid, F, rng)
    return companion_family(shared, random_gammas(monoid, F, rng))


# ---------------------------------------------------------------------------
# cusp expansions
# ---------------------------------------------------------------------------

@dataclass
class CuspExpansion:
    """Coefficients of a system at one cusp, re-indexed by integral ideals.

    For the plain expansion the index xi runs over (a^-1)^+ and is stored as
    the ideal m = xi*a, with value c(m).  For the twisted expansion xi runs
    over p^-1 (a^-1)^+ and is stored as n = xi*p*a with value c(n);
    ``integral[i]`` records whether xi lies in (a^-1)^+, i.e. (p) | n.
    """

    cusp: str
    norm_bound: int
    ideals: list[Ideal]
    values: np.ndarray
    field: FieldDescriptor
    twisted: bool = False
    integral: np.ndarray | None = None

    def coefficient(self, m: Ideal) -> FqElem:
        try:
            i = self.ideals.index(m)
        except ValueError:
            raise KeyError(f"{m} is outside the expansion") from None
        return FqElem(self.field, self.values[i])

    def __len__(self) -> int:
        return len(self.ideals)

    def to_json(self) -> dict:
        coeffs = []
        for i, m in enumerate(self.ideals):
            entry = {"ideal": m.labels(), "value": [int(x) for x in self.values[i]]}
            if self.twisted:
                entry["integral"] = bool(self.integral[i])
            coeffs.append(entry)
        return {"cusp": self.cusp, "norm_bound": self.norm_bound, "twisted": self.twisted,
                "field": self.field.to_json(), "coeffs": coeffs}


def cusp_expansion(system: EigenSystem, cusp: str, norm_bound: int) -> CuspExpansion:
    """The expansion at the cusp labelled ``cusp``: c(m) for N(m) <= norm_bound.

    The model is label-independent (the class group is collapsed), so every
    label gives the same coefficients.
    """
    if norm_bound < 1:
        raise ValueError("norm_bound must be >= 1")
    table = system.monoid.ideals_up_to(norm_bound)
    return CuspExpansion(str(cusp), int(norm_bound), table.ideals(), system.coefficients(table.exps),
                         system.field)


def twisted_cusp_expansion(system: EigenSystem, cusp: str, norm_bound: int) -> CuspExpansion:
    """The expansion over p^-1 (a^-1)^+, as coefficients c(n) at n = xi*p*a.

    Indices run over ideals n with N(n) <= N((p)) * norm_bound, so the
    integral part covers exactly the m = n/(p) with N(m) <= norm_bound.
    """
    if norm_bound < 1:
        raise ValueError("norm_bound must be >= 1")
    monoid = system.monoid
    pnorm = monoid.norm(monoid.p_ideal)
    table = monoid.ideals_up_to(pnorm * norm_bound)
    integral = table.divisible_by(monoid.p_ideal)
    return CuspExpansion(str(cusp), int(norm_bound), table.ideals(), system.coefficients(table.exps),
                         system.field, True, integral)
