"""Dense linear algebra over a prime field F_p with numpy integer arrays.

Conventions: vectors are rows.  A subspace is stored as a matrix of row
vectors in reduced row echelon form with leftmost pivots and no column
permutation, so the same input always yields the same basis.  An operator
matrix ``A`` acts on coordinate rows by ``c -> c @ A`` (row ``i`` of ``A``
holds the image of the ``i``-th basis vector).
"""
from __future__ import annotations

import numpy as np
from sympy import ZZ
from sympy.polys.galoistools import gf_factor

from .errors import NotInSpan

_INT64_SAFE = 2**62
_FLOAT_EXACT = 2**53


def _as_int(a) -> np.ndarray:
    return np.asarray(a, dtype=np.int64)


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """(A @ B) mod p without int64 overflow."""
    A = _as_int(A) % p
    B = _as_int(B) % p
    inner = A.shape[-1] if A.ndim else 1
    if inner * (p - 1) ** 2 < _FLOAT_EXACT:
        # BLAS in double precision is exact below 2^53
        out = A.astype(np.float64) @ B.astype(np.float64)
        return out.astype(np.int64) % p
    if inner * (p - 1) ** 2 < _INT64_SAFE:
        return (A @ B) % p
    return ((A.astype(object) @ B.astype(object)) % p).astype(np.int64)


def rref(A: np.ndarray, p: int, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form (zero rows dropped) and pivot columns.

    With ``ncols`` only the first ``ncols`` columns are eligible as pivots and
    rows that vanish there are dropped (the remaining columns ride along).
    """
    R = _as_int(A).copy() % p
    if R.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = R.shape
    cols = cols if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        f = R[:, c].copy()
        f[r] = 0
        nzr = np.nonzero(f)[0]
        if nzr.size:
            R[nzr] = (R[nzr] - np.outer(f[nzr], R[r]) % p) % p
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(A: np.ndarray, p: int) -> int:
    return len(rref(A, p)[1])


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning {x : A @ x = 0}, in echelon form."""
    A = _as_int(A)
    n = A.shape[1]
    R, piv = rref(A, p)
    pset = set(piv)
    free = [c for c in range(n) if c not in pset]
    K = np.zeros((len(free), n), dtype=np.int64)
    K[np.arange(len(free)), free] = 1
    if piv and free:
        K[:, piv] = (-R[:, free].T) % p
    if len(K):
        K, _ = rref(K, p)
    return K


def left_kernel(A: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning {x : x @ A = 0}."""
    return nullspace(_as_int(A).T, p)


def inverse(A: np.ndarray, p: int) -> np.ndarray:
    A = _as_int(A) % p
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix is not square")
    R, piv = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular mod %d" % p)
    return R[:, n:]


def coordinates(V: np.ndarray, basis: np.ndarray, pivots: list[int], p: int,
                check_upto: int | None = None) -> np.ndarray:
    """Coordinates of the rows of V in an RREF basis; NotInSpan if a row is outside.

    The residual is checked on the first ``check_upto`` columns (all by default).
    """
    V = _as_int(V) % p
    coeffs = V[:, pivots] if len(pivots) else np.zeros((V.shape[0], 0), dtype=np.int64)
    n = V.shape[1] if check_upto is None else min(check_upto, V.shape[1])
    resid = (V[:, :n] - matmul_mod(coeffs, basis[:, :n], p)) % p
    bad = np.nonzero(resid.any(axis=1))[0]
    if bad.size:
        i = int(bad[0])
        j = int(np.nonzero(resid[i])[0][0])
        raise NotInSpan(f"vector {i} is not in the span (first residual at column {j})")
    return coeffs


class EchelonBuilder:
    """Incrementally grown RREF basis that remembers how it was made.

    Each accepted input vector is stored as a *source*; the basis satisfies
    ``basis = transform @ sources`` at all times.
    """

    def __init__(self, width: int, p: int):
        self.p = p
        self.width = width
        self.basis = np.zeros((0, width), dtype=np.int64)
        self.transform = np.zeros((0, 0), dtype=np.int64)
        self.sources = np.zeros((0, width), dtype=np.int64)
        self.pivots: list[int] = []
        self.source_tags: list = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, V: np.ndarray) -> np.ndarray:
        V = _as_int(V) % self.p
        if self.rank == 0:
            return V
        return (V - matmul_mod(V[:, self.pivots], self.basis, self.p)) % self.p

    def add(self, V: np.ndarray, tags=None) -> int:
        """Add the rows of V as one batch; returns the number of new independent rows.

        A batch that raises the rank is kept whole as sources (dependent rows
        included), so callers can treat a batch as a unit.
        """
        p = self.p
        V = np.atleast_2d(_as_int(V)) % p
        b = len(V)
        tags = list(tags) if tags is not None else [None] * b
        r, s = self.rank, len(self.sources)
        Vr = self.reduce(V)
        if not Vr.any():
            return 0
        # Vr = Y @ [sources; V] with Y = [-V[:, piv] @ T | I]
        Y = np.zeros((b, s + b), dtype=np.int64)
        if r:
            Y[:, :s] = (-matmul_mod(V[:, self.pivots], self.transform, p)) % p
        Y[:, s:] = np.eye(b, dtype=np.int64)
        R, piv = rref(np.hstack([Vr, Y]), p, ncols=self.width)
        new_B, new_T = R[:, :self.width], R[:, self.width:]
        B = self.basis
        T = np.hstack([self.transform, np.zeros((r, b), dtype=np.int64)])
        if r:
            C = B[:, piv]
            if C.any():
                B = (B - matmul_mod(C, new_B, p)) % p
                T = (T - matmul_mod(C, new_T, p)) % p
        allB = np.vstack([B, new_B])
        allT = np.vstack([T, new_T])
        allP = self.pivots + piv
        order = np.argsort(allP, kind="stable")
        self.basis = allB[order]
        self.transform = allT[order]
        self.pivots = [allP[i] for i in order]
        self.sources = np.vstack([self.sources, V])
        self.source_tags.extend(tags)
        return len(piv)


# ---------------------------------------------------------------------------
# characteristic polynomials and invariant subspaces
# ---------------------------------------------------------------------------

def charpoly(A: np.ndarray, p: int) -> list[int]:
    """Characteristic polynomial det(x - A) mod p, coefficients low degree first.

    Reduction to upper Hessenberg form followed by the standard three-term
    recurrence; O(n^3) field operations.
    """
    H = _as_int(A).copy() % p
    n = H.shape[0]
    for m in range(1, n - 1):
        nz = np.nonzero(H[m:, m - 1])[0]
        if nz.size == 0:
            continue
        i = m + int(nz[0])
        if i != m:
            H[[i, m]] = H[[m, i]]
            H[:, [i, m]] = H[:, [m, i]]
        tinv = pow(int(H[m, m - 1]), -1, p)
        u = H[m + 1:, m - 1] * tinv % p
        if u.any():
            H[m + 1:] = (H[m + 1:] - np.outer(u, H[m]) % p) % p
            H[:, m] = (H[:, m] + matmul_mod(H[:, m + 1:], u, p)) % p
    polys = [[1]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        # (x - h_mm) * prev
        cur = [0] * (m + 1)
        h = int(H[m - 1, m - 1])
        for j, c in enumerate(prev):
            cur[j + 1] = (cur[j + 1] + c) % p
            cur[j] = (cur[j] - h * c) % p
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = prod * int(H[i, i - 1]) % p
            if prod == 0:
                break
            coef = int(H[i - 1, m - 1]) * prod % p
            if coef:
                for j, c in enumerate(polys[i - 1]):
                    cur[j] = (cur[j] - coef * c) % p
        polys.append(cur)
    return polys[n]


def factor_poly(coeffs: list[int], p: int) -> list[tuple[list[int], int]]:
    """Monic irreducible factors over F_p with multiplicities (low degree first)."""
    high = [int(c) % p for c in reversed(coeffs)]
    while high and high[0] == 0:
        high.pop(0)
    _, facs = gf_factor(high, p, ZZ)
    out = [([int(c) % p for c in reversed(f)], m) for f, m in facs]
    out.sort(key=lambda fm: (len(fm[0]), list(reversed(fm[0]))))
    return out


def poly_of_matrix(coeffs: list[int], A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[0]
    R = np.zeros((n, n), dtype=np.int64)
    for c in reversed(coeffs):
        R = (matmul_mod(R, A, p) + int(c) * np.eye(n, dtype=np.int64)) % p
    return R


def matrix_power(A: np.ndarray, e: int, p: int) -> np.ndarray:
    n = A.shape[0]
    R = np.eye(n, dtype=np.int64)
    base = _as_int(A) % p
    while e:
        if e & 1:
            R = matmul_mod(R, base, p)
        base = matmul_mod(base, base, p)
        e >>= 1
    return R


def restrict(A: np.ndarray, W: np.ndarray, p: int) -> np.ndarray:
    """Matrix of A on the invariant row space W (rows of W in RREF)."""
    Wr, piv = rref(W, p)
    if len(piv) != len(W):
        raise ValueError("W must have independent rows")
    img = matmul_mod(W, A, p)
    # coordinates with respect to W itself: solve X @ W = img
    Winv = inverse(W[:, piv], p)
    X = matmul_mod(img[:, piv], Winv, p)
    if ((matmul_mod(X, W, p) - img) % p).any():
        raise NotInSpan("subspace is not invariant under the operator")
    return X
