"""The Koszul-type complexes C_i(phi), their splices D_i(phi), and homology in graded pieces.

Bases: position k of C_i is spanned by y_S (x) g^e with S a k-subset of the
columns of phi and e a multiset of rows of size i-k.  The left strand of D_i
uses y_S (x) g^(e)* (x) det(G)*, dual monomials of the symmetric power.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Iterable, NamedTuple

import numpy as np

from .exactalg import GradedFreeModule, HomogMatrix, compose, graded_piece, hilbert_dim
from .exactalg.linalg import rank as _rank
from .exactalg.linalg import rank_lower_bound
from .exactalg.poly import HomogPoly
from .model import DeterminantalModel

# pieces whose smaller side exceeds this are ranked through a random sketch
SKETCH_THRESHOLD = 6000


class BasisIndex(NamedTuple):
    wedge: tuple[int, ...]
    sym: tuple[int, ...]
    dual: bool = False       # sym is a dual (divided-power) multiset
    det_twist: bool = False  # carries the top exterior power of G*


@dataclass
class GradedComplex:
    """Free modules at positions 0..L and the maps between neighbours.

    ``differentials[k-1]`` joins positions k and k-1: it goes k -> k-1 for a
    chain complex and k-1 -> k when ``cochain`` is set (duals keep positions).
    """

    modules: list[GradedFreeModule]
    differentials: list[HomogMatrix]
    label: str = ""
    cochain: bool = False
    bases: list[list[BasisIndex]] | None = None
    n_vars: int = 0
    p: int = 0

    @property
    def length(self) -> int:
        return len(self.modules) - 1

    def ranks(self) -> list[int]:
        return [m.rank for m in self.modules]

    def outgoing(self, k: int) -> HomogMatrix | None:
        """The map leaving position k (None at the ends)."""
        j = k if self.cochain else k - 1
        return self.differentials[j] if 0 <= j < len(self.differentials) else None

    def incoming(self, k: int) -> HomogMatrix | None:
        j = k - 1 if self.cochain else k
        return self.differentials[j] if 0 <= j < len(self.differentials) else None

    def restrict(self, lam) -> "GradedComplex":
        """Tensor with R/(x_n - sum lam_j x_j): one variable fewer."""
        return GradedComplex(self.modules, [d.substitute_last(lam) for d in self.differentials],
                             self.label + "|H", self.cochain, self.bases, self.n_vars - 1, self.p)

    def shift(self, s: int) -> "GradedComplex":
        return GradedComplex([m.shift(s) for m in self.modules], [d.shift(s) for d in self.differentials],
                             f"{self.label}({s})", self.cochain, self.bases, self.n_vars, self.p)


def _wedge_sym_basis(ncols: int, t: int, k: int, s: int) -> list[BasisIndex]:
    return [BasisIndex(S, e) for S in combinations(range(ncols), k)
            for e in combinations_with_replacement(range(t), s)]


def _koszul_map(model: DeterminantalModel, src: list[BasisIndex], tgt: list[BasisIndex],
                src_mod: GradedFreeModule, tgt_mod: GradedFreeModule) -> HomogMatrix:
    """y_S g^e -> sum_l (-1)^l sum_m phi[m, s_l] y_{S - s_l} g^{e + m}."""
    index = {b: r for r, b in enumerate(tgt)}
    ent: dict[tuple[int, int], HomogPoly] = {}
    for col, (S, e, _, _) in enumerate(src):
        for pos, s in enumerate(S):
            rest = S[:pos] + S[pos + 1:]
            for m in range(model.t):
                f = model.entry(m, s)
                if f.is_zero():
                    continue
                row = index[BasisIndex(rest, tuple(sorted(e + (m,))))]
                ent[(row, col)] = -f if pos % 2 else f
    return HomogMatrix(src_mod, tgt_mod, ent, n_vars=model.n_vars, p=model.p)


def build_C(model: DeterminantalModel, i: int) -> GradedComplex:
    """C_i: positions k = 0..min(i, t+c-1) carry wedge^k F (x) S_{i-k} G."""
    if i < 0:
        raise ValueError("C_i needs i >= 0")
    t, ncols = model.t, model.t + model.c - 1
    a, b = model.dm.a, model.dm.b
    bases, mods = [], []
    for k in range(min(i, ncols) + 1):
        basis = _wedge_sym_basis(ncols, t, k, i - k)
        bases.append(basis)
        mods.append(GradedFreeModule(sum(a[j] for j in S) + sum(b[m] for m in e) for S, e, _, _ in basis))
    diffs = [_koszul_map(model, bases[k], bases[k - 1], mods[k], mods[k - 1]) for k in range(1, len(mods))]
    return GradedComplex(mods, diffs, f"C_{i}", False, bases, model.n_vars, model.p)


def _perm_sign(seq: Iterable[int]) -> int:
    seq = list(seq)
    inv = sum(1 for x in range(len(seq)) for y in range(x + 1, len(seq)) if seq[x] > seq[y])
    return -1 if inv % 2 else 1


def build_D(model: DeterminantalModel, i: int) -> GradedComplex:
    """D_i for -1 <= i <= c: C_i spliced to the dual strand through the maximal minors."""
    t, c = model.t, model.c
    if not -1 <= i <= c:
        raise ValueError(f"D_i is defined for -1 <= i <= c (got i={i}, c={c})")
    if i == c:
        cx = build_C(model, c)
        cx.label = f"D_{c}"
        return cx
    ncols = t + c - 1
    a, b = model.dm.a, model.dm.b
    btot = sum(b)
    right = build_C(model, i) if i >= 0 else None
    mods = list(right.modules) if right else []
    bases = list(right.bases) if right else []
    diffs = list(right.differentials) if right else []
    for l in range(c - i):
        basis = [BasisIndex(S, e, True, True) for S in combinations(range(ncols), t + i + l)
                 for e in combinations_with_replacement(range(t), l)]
        mod = GradedFreeModule(sum(a[j] for j in S) - sum(b[m] for m in e) - btot for S, e, _, _ in basis)
        if bases:
            prev, prev_mod = bases[-1], mods[-1]
            if l == 0:
                diffs.append(_splice_map(model, basis, prev, mod, prev_mod))
            else:
                diffs.append(_dual_strand_map(model, basis, prev, mod, prev_mod))
        bases.append(basis)
        mods.append(mod)
    return GradedComplex(mods, diffs, f"D_{i}", False, bases, model.n_vars, model.p)


def _splice_map(model, src, tgt, src_mod, tgt_mod) -> HomogMatrix:
    """y_S (x) det G* -> sum_{T in S, |T| = t} sign(T, S) det(phi_T) y_{S - T}."""
    t = model.t
    index = {bi.wedge: r for r, bi in enumerate(tgt)}
    ent = {}
    for col, bi in enumerate(src):
        S = bi.wedge
        for T in combinations(S, t):
            rest = tuple(x for x in S if x not in T)
            minor = model.minor(T)
            if minor.is_zero():
                continue
            sgn = _perm_sign(T + rest)
            ent[(index[rest], col)] = minor if sgn > 0 else -minor
    return HomogMatrix(src_mod, tgt_mod, ent, n_vars=model.n_vars, p=model.p)


def _dual_strand_map(model, src, tgt, src_mod, tgt_mod) -> HomogMatrix:
    """y_S g^(e)* -> sum_{s in S} sum_{m: e_m > 0} (-1)^pos(s) phi[m, s] y_{S-s} g^(e - m)*."""
    index = {(bi.wedge, bi.sym): r for r, bi in enumerate(tgt)}
    ent = {}
    for col, bi in enumerate(src):
        S, e = bi.wedge, bi.sym
        for m in sorted(set(e)):
            k = e.index(m)
            e2 = e[:k] + e[k + 1:]
            for pos, s in enumerate(S):
                f = model.entry(m, s)
                if f.is_zero():
                    continue
                row = index[(S[:pos] + S[pos + 1:], e2)]
                ent[(row, col)] = -f if pos % 2 else f
    return HomogMatrix(src_mod, tgt_mod, ent, n_vars=model.n_vars, p=model.p)


def dualize(cx: GradedComplex, extra_twist: int = 0) -> GradedComplex:
    """Hom(cx, R(extra_twist)); positions are kept and the arrows reverse."""
    mods = [m.dual(extra_twist) for m in cx.modules]
    diffs = [d.transpose_dual(extra_twist) for d in cx.differentials]
    return GradedComplex(mods, diffs, f"Hom({cx.label},R({extra_twist}))", not cx.cochain, cx.bases,
                         cx.n_vars, cx.p)


def verify_d_squared(cx: GradedComplex) -> bool:
    for k in range(len(cx.differentials) - 1):
        first, second = cx.differentials[k + 1], cx.differentials[k]
        if cx.cochain:
            first, second = second, first
        if not compose(second, first).is_zero():
            return False
    return True


def piece_dim(cx: GradedComplex, k: int, nu: int) -> int:
    return hilbert_dim(cx.modules[k], nu, cx.n_vars)


def map_rank(d: HomogMatrix | None, nu: int, rng: np.random.Generator | None = None) -> int:
    """Rank of the degree-nu piece; sketched above SKETCH_THRESHOLD (a lower bound then)."""
    if d is None:
        return 0
    rows = hilbert_dim(d.target, nu, d.n_vars)
    cols = hilbert_dim(d.source, nu, d.n_vars)
    if rows == 0 or cols == 0 or d.is_zero():
        return 0
    fm = graded_piece(d, nu)
    if min(rows, cols) > SKETCH_THRESHOLD and max(rows, cols) > 2 * min(rows, cols):
        return rank_lower_bound(fm.data, d.p, rng or np.random.default_rng(0))
    return _rank(fm.data, d.p)


def homology_dim(cx: GradedComplex, position: int, nu: int) -> int:
    if not 0 <= position <= cx.length:
        raise ValueError("position outside the complex")
    dim = piece_dim(cx, position, nu)
    if dim == 0:
        return 0
    out = map_rank(cx.outgoing(position), nu)
    inc = map_rank(cx.incoming(position), nu)
    h = dim - out - inc
    if h < 0:
        raise ArithmeticError("negative homology: maps do not compose to zero")
    return h


@dataclass
class ExactnessReport:
    label: str
    nu_range: tuple[int, int]
    failures: list[tuple[int, int, int]] = field(default_factory=list)  # (position, nu, dim)
    method: dict[int, str] = field(default_factory=dict)

    @property
    def clean(self) -> bool:
        return not self.failures


def _min_degree(cx: GradedComplex, k: int) -> int:
    return min(cx.modules[k].twists) if cx.modules[k].rank else 0


DIRECT_LIMIT = 2500


def _coker_hf_upper(cx: GradedComplex, k: int, hi: int, rng, limit: int) -> dict[int, int]:
    """Upper bounds for the Hilbert function of coker(P_{k+1} -> P_k) in degrees <= hi.

    Small pieces are ranked directly.  Larger ones use a general linear form x:
    HF(N, j) <= HF(N, j-1) + HF(N/xN, j), and N/xN is the cokernel of the same
    map cut by the hyperplane, bounded recursively.  The bound is tight when x
    is a nonzerodivisor on N in degree j-1.
    """
    out: dict[int, int] = {}
    if cx.modules[k].rank == 0:
        return out
    d = cx.incoming(k)
    sub = None
    for j in range(_min_degree(cx, k), hi + 1):
        dim = piece_dim(cx, k, j)
        src = piece_dim(cx, k + 1, j) if d is not None else 0
        if d is None or min(dim, src) <= limit or cx.n_vars <= 2:
            out[j] = dim - map_rank(d, j, rng)
        else:
            if sub is None:
                red = cx.restrict(rng.integers(0, cx.p, size=cx.n_vars - 1))
                sub = _coker_hf_upper(red, k, hi, rng, limit)
            out[j] = out.get(j - 1, 0) + sub.get(j, 0)
    return out


def homology_upper_bounds(cx: GradedComplex, hi: int, seed: int = 0,
                          limit: int = DIRECT_LIMIT) -> dict[tuple[int, int], int]:
    """Upper bounds for dim H_k in every degree <= hi, for a chain complex.

    H_k = HF(coker d_{k+1}) - rank d_k and rank d_k = dim P_{k-1} - HF(coker d_k),
    so upper bounds on the cokernel Hilbert functions bound the homology.
    """
    if cx.cochain:
        raise ValueError("bounds are implemented for chain complexes")
    rng = np.random.default_rng(seed)
    U = [_coker_hf_upper(cx, k, hi, rng, limit) for k in range(cx.length + 1)]
    out = {}
    for k in range(1, cx.length + 1):
        for nu in range(_min_degree(cx, k), hi + 1):
            out[(k, nu)] = U[k].get(nu, 0) + U[k - 1].get(nu, 0) - piece_dim(cx, k - 1, nu)
    return out


def sampled_exactness(cx: GradedComplex, nu_range: tuple[int, int], positions: Iterable[int] | None = None,
                      reduce: bool = True, seed: int = 0) -> ExactnessReport:
    """Check that homology vanishes at the interior positions for every nu in range.

    With ``reduce`` (chain complexes only) vanishing is first certified from
    upper bounds built on hyperplane sections (see homology_upper_bounds); any
    (position, degree) the bounds leave open is recomputed exactly.
    """
    lo, hi = nu_range
    if lo > hi:
        raise ValueError("empty degree range")
    rep = ExactnessReport(cx.label, (lo, hi))
    if positions is None:
        positions = range(1, cx.length + 1) if not cx.cochain else range(0, cx.length)
    positions = list(positions)
    bounds = homology_upper_bounds(cx, hi, seed) if reduce and not cx.cochain else {}
    for k in positions:
        rep.method[k] = "bounds" if bounds else "direct"
        for nu in range(lo, hi + 1):
            if bounds and bounds.get((k, nu), 0) <= 0:
                continue
            if bounds:
                rep.method[k] = "bounds+direct"
            h = homology_dim(cx, k, nu)
            if h:
                rep.failures.append((k, nu, h))
    return rep


def euler_characteristic(cx: GradedComplex, nu: int) -> int:
    return sum((-1) ** k * piece_dim(cx, k, nu) for k in range(len(cx.modules)))


def wedge_sym_rank(t: int, c: int, i: int, k: int) -> int:
    return comb(t + c - 1, k) * comb(t - 1 + i - k, i - k)


def left_strand_rank(t: int, c: int, i: int, l: int) -> int:
    return comb(t + c - 1, t + i + l) * comb(t - 1 + l, l)
