"""Exact linear algebra over GF(p).

Small matrices go through a compiled Gauss-Jordan kernel on int64.  Large
ranks use a panel elimination whose trailing updates are float64 matrix
products; with p < 2**26 and panels of at most ``_PANEL`` columns every
intermediate sum stays below 2**53, so the float arithmetic is exact.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from numba import njit

_PANEL = 128
_DENSE_LIMIT = 300
_BASE = 8


@njit(cache=True)
def _inv_mod(a, p):
    # a^(p-2) mod p
    r = 1
    b = a % p
    e = p - 2
    while e > 0:
        if e & 1:
            r = (r * b) % p
        b = (b * b) % p
        e >>= 1
    return r


@njit(cache=True)
def _rref_inplace(A, p):
    """Reduced row echelon form in place; returns the pivot columns."""
    m, n = A.shape
    pivots = np.empty(min(m, n), dtype=np.int64)
    r = 0
    for col in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if A[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
        inv = _inv_mod(A[r, col], p)
        for j in range(col, n):
            A[r, j] = (A[r, j] * inv) % p
        for i in range(m):
            if i != r:
                f = A[i, col]
                if f != 0:
                    for j in range(col, n):
                        A[i, j] = (A[i, j] - f * A[r, j]) % p
        pivots[r] = col
        r += 1
    return pivots[:r]


@njit(cache=True)
def _panel_pivots(P, p):
    """Row and column pivots of a small panel (forward elimination on a copy)."""
    m, n = P.shape
    A = P.copy()
    rows = np.arange(m)
    prow = np.empty(min(m, n), dtype=np.int64)
    pcol = np.empty(min(m, n), dtype=np.int64)
    r = 0
    for col in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if A[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
            tmp = rows[r]
            rows[r] = rows[piv]
            rows[piv] = tmp
        inv = _inv_mod(A[r, col], p)
        for i in range(r + 1, m):
            f = A[i, col]
            if f != 0:
                f = (f * inv) % p
                for j in range(col, n):
                    A[i, j] = (A[i, j] - f * A[r, j]) % p
        prow[r] = rows[r]
        pcol[r] = col
        r += 1
    return prow[:r], pcol[:r]


@njit(cache=True)
def _sub_reduce(rest, keep, upd, p):
    """rows ``keep`` of (rest - upd) mod p, with upd aligned to those rows."""
    out = np.empty((len(keep), rest.shape[1]), dtype=np.float64)
    pinv = 1.0 / p
    for a in range(len(keep)):
        i = keep[a]
        for j in range(rest.shape[1]):
            u = upd[a, j]
            u -= np.floor(u * pinv) * p
            v = rest[i, j] - u
            if v < 0:
                v += p
            out[a, j] = v
    return out


def _as_dense(a, p) -> np.ndarray:
    if sp.issparse(a):
        a = a.toarray()
    return np.asarray(a, dtype=np.int64) % p


def rref(a, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form and pivot columns of ``a`` mod p."""
    A = np.ascontiguousarray(_as_dense(a, p))
    piv = _rref_inplace(A, p)
    return A, piv


def _fmatmul(a, b, p):
    # exact while inner * p**2 < 2**53; callers keep the inner size <= _PANEL
    out = np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64)
    return out - np.floor(out / p) * p


def _pivot_search(A: np.ndarray, p: int, b: int) -> tuple[np.ndarray, np.ndarray]:
    """Pivot rows and columns of a forward elimination of ``A`` (float64, reduced).

    Columns are handled in panels of ``b``; each panel is searched recursively
    with a narrower width and the non-pivot rows are then cleared of the panel
    by one matrix product.
    """
    m, n = A.shape
    if b <= _BASE or n <= _BASE:
        return _panel_pivots(A.astype(np.int64), p)
    rows = np.arange(m)
    col0 = 0
    out_r, out_c = [], []
    while A.shape[0] and A.shape[1]:
        bb = min(b, A.shape[1])
        panel = A[:, :bb]
        prow, pcol = _pivot_search(panel, p, b // 4)
        rest = A[:, bb:]
        if len(prow):
            out_r.append(rows[prow])
            out_c.append(col0 + pcol)
        col0 += bb
        if len(prow) == 0:
            A = rest
            continue
        mask = np.ones(A.shape[0], dtype=bool)
        mask[prow] = False
        if not mask.any() or rest.shape[1] == 0:
            break
        keep = np.flatnonzero(mask)
        # X solves X * panel[prow][:, pcol] = panel[keep][:, pcol]
        inv = inverse(panel[prow][:, pcol].astype(np.int64), p)
        X = _fmatmul(panel[keep][:, pcol], inv, p)
        upd = X @ rest[prow]
        A = _sub_reduce(rest, keep, upd, p)
        rows = rows[keep]
    if not out_r:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(out_r), np.concatenate(out_c)


def _blocked_rank(A: np.ndarray, p: int) -> int:
    """Rank of a dense float64 matrix with entries in range(p)."""
    return len(_pivot_search(A, p, _PANEL)[0])


def rank(a, p: int) -> int:
    """Exact rank of ``a`` over GF(p); ``a`` may be dense or scipy-sparse."""
    m, n = a.shape
    if m == 0 or n == 0:
        return 0
    if sp.issparse(a) and a.nnz == 0:
        return 0
    if min(m, n) <= _DENSE_LIMIT:
        A = np.ascontiguousarray(_as_dense(a, p))
        if m > n:
            A = np.ascontiguousarray(A.T)
        return len(_rref_inplace(A, p))
    A = a.toarray() if sp.issparse(a) else np.asarray(a)
    A = np.asarray(A, dtype=np.float64)
    if m < n:
        # eliminate along the short side: panels run over rows of the transpose
        A = A.T
    return _blocked_rank(np.ascontiguousarray(A % p), p)


def rank_lower_bound(a, p: int, rng: np.random.Generator, width: int | None = None) -> int:
    """rank(a @ T) for a random T; never exceeds rank(a), equal with high probability.

    Useful when ``a`` is long and thin in one direction only: the sketch is
    ``min(m, n)`` (or ``width``) wide, which bounds the dense memory needed.
    """
    m, n = a.shape
    if m == 0 or n == 0:
        return 0
    if m < n:
        a = a.T
        m, n = n, m
    k = min(n, m) if width is None else min(width, n)
    if k >= n:
        return rank(a, p)
    T = rng.integers(0, p, size=(n, k)).astype(np.float64)
    if sp.issparse(a):
        a = sp.csr_matrix(a, dtype=np.float64)
        # row sums of nnz_per_row * p**2 stay far below 2**53
        B = a @ T
    else:
        B = np.asarray(a, dtype=np.float64) @ T
    B = np.fmod(B, p)
    return rank(B, p)


def kernel_dim(a, p: int) -> int:
    return a.shape[1] - rank(a, p)


def nullspace(a, p: int) -> np.ndarray:
    """Basis of {v : a v = 0} as the columns of an (ncols x k) int64 matrix."""
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(a, p)
    free = [j for j in range(n) if j not in set(piv.tolist())]
    N = np.zeros((n, len(free)), dtype=np.int64)
    for k, j in enumerate(free):
        N[j, k] = 1
        for r, pc in enumerate(piv):
            N[pc, k] = (-R[r, j]) % p
    return N


def solve(a, b, p: int) -> np.ndarray | None:
    """One solution x of a x = b (b may be a matrix), or None if inconsistent."""
    A = _as_dense(a, p)
    B = _as_dense(b, p)
    vec = B.ndim == 1
    if vec:
        B = B[:, None]
    m, n = A.shape
    aug = np.ascontiguousarray(np.hstack([A, B]))
    R, piv = rref(aug, p)
    if len(piv) and piv[-1] >= n:
        return None
    X = np.zeros((n, B.shape[1]), dtype=np.int64)
    for r, pc in enumerate(piv):
        X[pc] = R[r, n:]
    return X[:, 0] if vec else X


def inverse(a, p: int) -> np.ndarray:
    A = _as_dense(a, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if len(piv) < n or piv[n - 1] >= n:
        raise ZeroDivisionError("singular matrix mod p")
    return R[:, n:]


def matmul(a, b, p: int) -> np.ndarray:
    """Product mod p, exact for any inner dimension (int64 chunks)."""
    A = _as_dense(a, p)
    B = _as_dense(b, p)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    step = max(1, (1 << 62) // (p * p) - 1)
    for s in range(0, A.shape[1], step):
        out = (out + A[:, s:s + step] @ B[s:s + step]) % p
    return out
