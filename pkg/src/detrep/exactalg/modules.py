"""Graded free modules over R = GF(p)[x0..xn] and degree-0 maps between them."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from .poly import HomogPoly, _basis_array, monomial_basis, monomial_count, monomial_index, poly_mul, zero_poly


@dataclass(frozen=True)
class GradedFreeModule:
    """``sum_q R(-twists[q])``."""

    twists: tuple[int, ...]

    def __init__(self, twists: Iterable[int]):
        object.__setattr__(self, "twists", tuple(int(u) for u in twists))

    @property
    def rank(self) -> int:
        return len(self.twists)

    def shift(self, s: int) -> "GradedFreeModule":
        """The module M(s): every twist decreases by s."""
        return GradedFreeModule(u - s for u in self.twists)

    def dual(self, s: int = 0) -> "GradedFreeModule":
        """Hom(-, R(s))."""
        return GradedFreeModule(-u - s for u in self.twists)

    def __add__(self, other: "GradedFreeModule") -> "GradedFreeModule":
        return GradedFreeModule(self.twists + other.twists)

    def offsets(self, nu: int, n_vars: int) -> np.ndarray:
        dims = [monomial_count(n_vars, nu - u) for u in self.twists]
        return np.concatenate([[0], np.cumsum(dims, dtype=np.int64)])


def hilbert_dim(f: GradedFreeModule, nu: int, n_vars: int) -> int:
    return sum(comb(n_vars - 1 + nu - u, n_vars - 1) for u in f.twists if nu >= u)


class HomogMatrix:
    """Matrix of forms from ``source`` to ``target``; entry (p, q) has degree
    ``source.twists[q] - target.twists[p]``. Stored sparsely by nonzero entry."""

    def __init__(self, source: GradedFreeModule, target: GradedFreeModule,
                 entries: Mapping[tuple[int, int], HomogPoly] | None = None, *,
                 n_vars: int, p: int, check: bool = True):
        self.source = source
        self.target = target
        self.n_vars = n_vars
        self.p = p
        self._entries: dict[tuple[int, int], HomogPoly] = {}
        for (r, c), f in (entries or {}).items():
            if f.is_zero():
                continue
            if check:
                want = source.twists[c] - target.twists[r]
                if f.degree != want:
                    raise ValueError(f"entry ({r},{c}) has degree {f.degree}, slot needs {want}")
                if f.n_vars != n_vars or f.p != p:
                    raise ValueError("entry lives in a different ring")
            self._entries[(r, c)] = f
        self._arrays = None

    @property
    def shape(self) -> tuple[int, int]:
        return (self.target.rank, self.source.rank)

    def slot_degree(self, r: int, c: int) -> int:
        return self.source.twists[c] - self.target.twists[r]

    def entry(self, r: int, c: int) -> HomogPoly:
        f = self._entries.get((r, c))
        return f if f is not None else zero_poly(self.n_vars, self.slot_degree(r, c), self.p)

    @property
    def entries(self) -> list[list[HomogPoly]]:
        return [[self.entry(r, c) for c in range(self.source.rank)] for r in range(self.target.rank)]

    def nonzero(self) -> dict[tuple[int, int], HomogPoly]:
        return dict(self._entries)

    def is_zero(self) -> bool:
        return not self._entries

    def __eq__(self, other):
        if not isinstance(other, HomogMatrix):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self._entries == other._entries)

    def __repr__(self):
        return f"HomogMatrix({self.target.rank}x{self.source.rank}, nnz={len(self._entries)})"

    def transpose_dual(self, s: int = 0) -> "HomogMatrix":
        """Hom(-, R(s)) applied to the map: the transpose between dual modules."""
        ent = {(c, r): f for (r, c), f in self._entries.items()}
        return HomogMatrix(self.target.dual(s), self.source.dual(s), ent,
                           n_vars=self.n_vars, p=self.p, check=False)

    def shift(self, s: int) -> "HomogMatrix":
        return HomogMatrix(self.source.shift(s), self.target.shift(s), self._entries,
                           n_vars=self.n_vars, p=self.p, check=False)

    def substitute_last(self, lam) -> "HomogMatrix":
        ent = {k: f.substitute_last(lam) for k, f in self._entries.items()}
        return HomogMatrix(self.source, self.target, ent, n_vars=self.n_vars - 1, p=self.p, check=False)

    def constant_part(self) -> np.ndarray:
        """Scalar matrix of the degree-0 entries (other slots read as 0)."""
        out = np.zeros(self.shape, dtype=np.int64)
        for (r, c), f in self._entries.items():
            if f.degree == 0:
                out[r, c] = next(iter(f.items()))[1]
        return out

    def _term_arrays(self):
        # per nonzero entry: (row, col, exponents, coefficients)
        if self._arrays is None:
            arr = []
            for (r, c), f in self._entries.items():
                items = list(f.items())
                exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), self.n_vars)
                vals = np.array([v for _, v in items], dtype=np.int64)
                arr.append((r, c, exps, vals))
            self._arrays = arr
        return self._arrays


def compose(a: HomogMatrix, b: HomogMatrix) -> HomogMatrix:
    """a after b."""
    if a.source != b.target:
        raise ValueError("maps are not composable")
    by_row: dict[int, list[tuple[int, HomogPoly]]] = {}
    for (r, c), f in b.nonzero().items():
        by_row.setdefault(r, []).append((c, f))
    acc: dict[tuple[int, int], HomogPoly] = {}
    for (r, m), f in a.nonzero().items():
        for c, g in by_row.get(m, ()):
            h = poly_mul(f, g)
            key = (r, c)
            acc[key] = acc[key] + h if key in acc else h
    return HomogMatrix(b.source, a.target, acc, n_vars=a.n_vars, p=a.p, check=False)


def identity(f: GradedFreeModule, n_vars: int, p: int) -> HomogMatrix:
    one = HomogPoly(n_vars, 0, {(0,) * n_vars: 1}, p)
    return HomogMatrix(f, f, {(q, q): one for q in range(f.rank)}, n_vars=n_vars, p=p)


@dataclass
class FieldMatrix:
    """A graded piece as a sparse matrix over GF(p).

    Row and column labels are (summand index, exponent vector) pairs in the
    monomial order of :func:`monomial_basis`; they are produced on demand.
    """

    data: sp.csr_matrix
    p: int
    row_twists: tuple[int, ...] = ()
    col_twists: tuple[int, ...] = ()
    nu: int = 0
    n_vars: int = 1
    _dense: np.ndarray | None = field(default=None, repr=False)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def dense(self) -> np.ndarray:
        if self._dense is None:
            self._dense = self.data.toarray().astype(np.int64) % self.p
        return self._dense

    def _labels(self, twists):
        out = []
        for q, u in enumerate(twists):
            if self.nu >= u:
                out.extend((q, e) for e in monomial_basis(self.n_vars, self.nu - u))
        return out

    @property
    def row_basis(self) -> list[tuple[int, tuple[int, ...]]]:
        return self._labels(self.row_twists)

    @property
    def col_basis(self) -> list[tuple[int, tuple[int, ...]]]:
        return self._labels(self.col_twists)


def graded_piece(m: HomogMatrix, nu: int) -> FieldMatrix:
    """Degree-``nu`` component of ``m`` as a matrix from the source piece to the target piece."""
    n_vars, p = m.n_vars, m.p
    roff = m.target.offsets(nu, n_vars)
    coff = m.source.offsets(nu, n_vars)
    rows_l, cols_l, vals_l = [], [], []
    for r, c, exps, vals in m._term_arrays():
        sdeg = nu - m.source.twists[c]
        if sdeg < 0:
            continue
        tdeg = nu - m.target.twists[r]
        src = _basis_array(n_vars, sdeg)
        ns = len(src)
        colidx = coff[c] + np.arange(ns, dtype=np.int64)
        # every term shifts every source monomial into the target degree
        tgt = (src[None, :, :] + exps[:, None, :]).reshape(-1, n_vars)
        rows_l.append(roff[r] + monomial_index(tgt, tdeg))
        cols_l.append(np.tile(colidx, len(exps)))
        vals_l.append(np.repeat(vals, ns))
    shape = (int(roff[-1]), int(coff[-1]))
    if rows_l:
        data = sp.coo_matrix((np.concatenate(vals_l), (np.concatenate(rows_l), np.concatenate(cols_l))),
                             shape=shape, dtype=np.int64).tocsr()
        data.data %= p
        data.eliminate_zeros()
    else:
        data = sp.csr_matrix(shape, dtype=np.int64)
    return FieldMatrix(data, p, m.target.twists, m.source.twists, nu, n_vars)
