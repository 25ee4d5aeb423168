"""Extensions of graded modules built at the level of presentations.

Given a presentation G1 -> G0 of a module L1 and the first three terms
H2 -> H1 -> H0 of a resolution of L2, degree-0 classes in Ext^1_R(L2, L1)
are maps xi: H1 -> L1 with xi o d2 = 0, modulo those factoring through d1.
Each class is stored with a lift xi~: H1 -> G0 and glued into the block
presentation [[p1, xi~], [0, p2]] of the middle term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from .complexes import GradedComplex
from .exactalg import (GradedFreeModule, HomogMatrix, HomogPoly, compose, graded_piece, hilbert_dim,
                       nullspace, rank, rref, solve)
from .exactalg.poly import _basis_array, monomial_index
from .extengine import resolution
from .model import DeterminantalModel, degree

REG_SLACK = 3


@dataclass
class ModulePresentation:
    gens: GradedFreeModule
    rels: HomogMatrix
    syz: HomogMatrix | None = None
    label: str = ""

    @property
    def n_vars(self) -> int:
        return self.rels.n_vars

    @property
    def p(self) -> int:
        return self.rels.p

    @property
    def minimal(self) -> bool:
        return not self.rels.constant_part().any()

    def hilbert(self, nu: int) -> int:
        dim = hilbert_dim(self.gens, nu, self.n_vars)
        if dim == 0 or self.rels.source.rank == 0:
            return dim
        return dim - rank(graded_piece(self.rels, nu))

    def num_generators(self) -> int:
        """Minimal number of generators: rank of G0 minus the rank of the scalar part of the relations."""
        const = self.rels.constant_part() % self.p
        return self.gens.rank - (rank(const, self.p) if const.any() else 0)

    def as_dict(self) -> dict:
        return {"label": self.label, "gens": list(self.gens.twists), "rel_sources": list(self.rels.source.twists),
                "rels": _matrix_json(self.rels)}


def _matrix_json(m: HomogMatrix) -> list:
    return [{"row": r, "col": c, "terms": [[list(e), int(v)] for e, v in sorted(f.items())]}
            for (r, c), f in sorted(m.nonzero().items())]


def _from_complex(cx: GradedComplex, label: str) -> ModulePresentation:
    if cx.length < 1:
        raise ValueError("complex has no relations")
    syz = cx.differentials[1] if cx.length >= 2 else None
    return ModulePresentation(cx.modules[0], cx.differentials[0], syz, label)


def presentation_of(model: DeterminantalModel, which: str, s: int = 0, j: int | None = None) -> ModulePresentation:
    """Presentation of M, M^dual(s) or S_jM(s), truncated from the matching resolution."""
    if which == "M":
        cx = resolution(model, 1).shift(s)
        pres = _from_complex(cx, "M" if s == 0 else f"M({s})")
        return pres
    if which == "Mdual":
        return _from_complex(resolution(model, -1).shift(s), f"M^dual({s})")
    if which == "S":
        if j is None or j < 0:
            raise ValueError("S_jM needs j >= 0")
        if j > model.c and model.n + 1 < min(j, model.t + model.c - 1):
            raise ValueError(f"C_{j} is not known to resolve S_{j}M here")
        return _from_complex(resolution(model, j).shift(s), f"S_{j}M({s})")
    raise ValueError(f"unknown module {which!r}")


class HomSpace:
    """Coordinates on Hom(X, Y)_0: one block of monomials per matrix slot."""

    def __init__(self, source: GradedFreeModule, target: GradedFreeModule, n_vars: int, p: int):
        self.source, self.target, self.n_vars, self.p = source, target, n_vars, p
        self.offsets: dict[tuple[int, int], int] = {}
        pos = 0
        for i, v in enumerate(target.twists):
            for k, u in enumerate(source.twists):
                if u - v >= 0:
                    self.offsets[(i, k)] = pos
                    pos += len(_basis_array(n_vars, u - v))
        self.dim = pos

    def slot_degree(self, i: int, k: int) -> int:
        return self.source.twists[k] - self.target.twists[i]

    def to_vec(self, m: HomogMatrix) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        for (i, k), f in m.nonzero().items():
            exps = np.array([e for e, _ in f.items()], dtype=np.int64).reshape(-1, self.n_vars)
            idx = monomial_index(exps, f.degree)
            out[self.offsets[(i, k)] + idx] = [v for _, v in f.items()]
        return out

    def from_vec(self, vec) -> HomogMatrix:
        vec = np.asarray(vec, dtype=np.int64) % self.p
        ent = {}
        for (i, k), off in self.offsets.items():
            deg = self.slot_degree(i, k)
            basis = _basis_array(self.n_vars, deg)
            block = vec[off:off + len(basis)]
            nz = np.nonzero(block)[0]
            if len(nz):
                ent[(i, k)] = HomogPoly(self.n_vars, deg, {tuple(int(x) for x in basis[q]): int(block[q]) for q in nz},
                                        self.p)
        return HomogMatrix(self.source, self.target, ent, n_vars=self.n_vars, p=self.p)

    def _blocks(self, out: "HomSpace", pairs):
        # pairs: (in slot, out slot, exponents, coefficients) of a multiplication by one entry
        rows, cols, vals = [], [], []
        for (i, k), (r, m), exps, coefs in pairs:
            if (i, k) not in self.offsets or (r, m) not in out.offsets:
                continue
            src = _basis_array(self.n_vars, self.slot_degree(i, k))
            ns = len(src)
            tgt = (src[None, :, :] + exps[:, None, :]).reshape(-1, self.n_vars)
            rows.append(out.offsets[(r, m)] + monomial_index(tgt, out.slot_degree(r, m)))
            cols.append(np.tile(self.offsets[(i, k)] + np.arange(ns), len(exps)))
            vals.append(np.repeat(coefs, ns))
        if not rows:
            return np.zeros((out.dim, self.dim), dtype=np.int64)
        mat = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                            shape=(out.dim, self.dim), dtype=np.int64)
        return mat.toarray() % self.p

    def right_compose(self, d: HomogMatrix) -> tuple[np.ndarray, "HomSpace"]:
        """Matrix of xi -> xi o d, with d: X' -> X."""
        out = HomSpace(d.source, self.target, self.n_vars, self.p)
        pairs = []
        for k, m, exps, coefs in d._term_arrays():
            for i in range(self.target.rank):
                pairs.append(((i, k), (i, m), exps, coefs))
        return self._blocks(out, pairs), out

    def left_compose(self, a: HomogMatrix) -> tuple[np.ndarray, "HomSpace"]:
        """Matrix of zeta -> a o zeta, with a: Y -> Y'."""
        out = HomSpace(self.source, a.target, self.n_vars, self.p)
        pairs = []
        for r, i, exps, coefs in a._term_arrays():
            for k in range(self.source.rank):
                pairs.append(((i, k), (r, k), exps, coefs))
        return self._blocks(out, pairs), out


def _col_rank(a: np.ndarray, p: int) -> int:
    return rank(a, p) if a.size else 0


def _left_null(a: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning {y : y a = 0}."""
    if a.shape[1] == 0:
        return np.eye(a.shape[0], dtype=np.int64)
    return nullspace(a.T.copy(), p).T


@dataclass
class CocycleSpace:
    """Degree-0 Ext^1 classes, each represented by a lift H1 -> G0."""

    quot_res: tuple[HomogMatrix, HomogMatrix | None]
    sub: ModulePresentation
    hom: HomSpace
    cocycles: np.ndarray  # columns span the lifts satisfying the cocycle condition
    boundaries: np.ndarray  # columns span lifts of zero classes
    reps: np.ndarray  # columns: one lift per basis class
    p: int

    @property
    def dim(self) -> int:
        return self.reps.shape[1]

    def lifts(self) -> list[HomogMatrix]:
        return [self.hom.from_vec(self.reps[:, q]) for q in range(self.dim)]

    def class_rank(self, lifts: list[HomogMatrix]) -> int:
        """Rank of the given lifts modulo boundaries."""
        if not lifts:
            return 0
        vecs = np.column_stack([self.hom.to_vec(x) for x in lifts])
        base = _col_rank(self.boundaries, self.p)
        return _col_rank(np.hstack([self.boundaries, vecs]), self.p) - base

    def is_cocycle(self, lift: HomogMatrix) -> bool:
        v = self.hom.to_vec(lift)[:, None]
        return _col_rank(np.hstack([self.cocycles, v]), self.p) == _col_rank(self.cocycles, self.p)


def _span_basis(a: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] == 0:
        return a
    _, piv = rref(a, p)
    return a[:, list(piv)]


def _quot_maps(quot) -> tuple[HomogMatrix, HomogMatrix | None]:
    if isinstance(quot, GradedComplex):
        return quot.differentials[0], (quot.differentials[1] if quot.length >= 2 else None)
    return quot.rels, quot.syz


def cocycle_space(quot, sub: ModulePresentation) -> CocycleSpace:
    """Degree-0 Ext^1_R(L2, L1) from a resolution (or presentation with syzygies) of L2 and a presentation of L1."""
    d1, d2 = _quot_maps(quot)
    p, nv = sub.p, sub.n_vars
    G0, G1 = sub.gens, sub.rels.source
    H0, H1 = d1.target, d1.source
    if d1.n_vars != nv:
        raise ValueError("modules live over different rings")
    V = HomSpace(H1, G0, nv, p)
    if d2 is not None:
        psi, W = V.right_compose(d2)
        pi, _ = HomSpace(d2.source, G1, nv, p).left_compose(sub.rels)
        N = _left_null(pi, p)
        cond = (N @ psi) % p if N.size else np.zeros((0, V.dim), dtype=np.int64)
        Z = nullspace(cond, p) if cond.shape[0] else np.eye(V.dim, dtype=np.int64)
    else:
        Z = np.eye(V.dim, dtype=np.int64)
    b1, _ = HomSpace(H0, G0, nv, p).right_compose(d1)
    b2, _ = HomSpace(H1, G1, nv, p).left_compose(sub.rels)
    B = _span_basis(np.hstack([b1, b2]) % p, p)
    nb = B.shape[1]
    if Z.shape[1]:
        _, piv = rref(np.hstack([B, Z]) % p, p)
        new = [q - nb for q in piv if q >= nb]
        reps = Z[:, new]
    else:
        reps = Z
    return CocycleSpace((d1, d2), sub, V, Z, B, reps, p)


def _minor_polys(model: DeterminantalModel) -> list[HomogPoly]:
    return [model.minor(T) for T in combinations(range(model.t + model.c - 1), model.t)]


def a_module_subspace(space: CocycleSpace, model: DeterminantalModel) -> np.ndarray:
    """Columns (in the coordinates of ``space.reps``) of the classes whose extension is killed by I.

    For a minor f and a generator e of H0, choose y in H1 with d1(y) = f e; the
    extension is an A-module exactly when every xi(y) lies in the image of p1.
    """
    d1, _ = space.quot_res
    p, nv = space.p, space.sub.n_vars
    H0, H1 = d1.target, d1.source
    sub = space.sub
    rows = []
    for f in _minor_polys(model):
        for g, u in enumerate(H0.twists):
            nu = u + f.degree
            pt = GradedFreeModule([nu])
            rhs = HomogMatrix(pt, H0, {(g, 0): f}, n_vars=nv, p=p)
            Y = HomSpace(pt, H1, nv, p)
            P, T = Y.left_compose(d1)
            y = solve(P, T.to_vec(rhs), p)
            if y is None:
                raise ArithmeticError("I does not annihilate the quotient module")
            ymat = Y.from_vec(y)
            img = HomSpace(pt, sub.gens, nv, p)
            cols = [img.to_vec(compose(space.hom.from_vec(space.reps[:, q]), ymat)) for q in range(space.dim)]
            if not cols:
                continue
            obs = np.column_stack(cols)
            pim, _ = HomSpace(pt, sub.rels.source, nv, p).left_compose(sub.rels)
            N = _left_null(pim, p)
            if N.size:
                rows.append((N @ obs) % p)
    if not rows or space.dim == 0:
        return np.eye(space.dim, dtype=np.int64)
    return nullspace(np.vstack(rows), p)


def a_module_classes(space: CocycleSpace, model: DeterminantalModel) -> list[HomogMatrix]:
    coeffs = a_module_subspace(space, model)
    return [space.hom.from_vec((space.reps @ coeffs[:, q]) % space.p) for q in range(coeffs.shape[1])]


@dataclass
class ExtensionPresentation:
    sub: ModulePresentation
    quot: ModulePresentation
    cocycles: list[HomogMatrix]
    assembled: ModulePresentation
    rank: int
    is_A_module: bool | None = None
    split: bool = False
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        out = self.assembled.as_dict()
        out.update({"rank": self.rank, "is_A_module": self.is_A_module, "split": self.split,
                    "sub": self.sub.label, "quot": self.quot.label, "notes": self.notes})
        return out


def _block_sum(mods: list[GradedFreeModule]) -> GradedFreeModule:
    tw: list[int] = []
    for m in mods:
        tw.extend(m.twists)
    return GradedFreeModule(tw)


def assemble(sub: ModulePresentation, quots: list[ModulePresentation], lifts: list[HomogMatrix]) -> ModulePresentation:
    """Block presentation [[p1, xi_1 .. xi_k], [0, p2 (+) .. (+) p2]]."""
    if len(quots) != len(lifts):
        raise ValueError("one lift per quotient copy")
    gens = _block_sum([sub.gens] + [q.rels.target for q in quots])
    src = _block_sum([sub.rels.source] + [q.rels.source for q in quots])
    ent = dict(sub.rels.nonzero())
    r0, c0 = sub.gens.rank, sub.rels.source.rank
    roff, coff = r0, c0
    for q, xi in zip(quots, lifts):
        if xi.target != sub.gens or xi.source != q.rels.source:
            raise ValueError("lift has the wrong shape")
        for (r, c), f in xi.nonzero().items():
            ent[(r, coff + c)] = f
        for (r, c), f in q.rels.nonzero().items():
            ent[(roff + r, coff + c)] = f
        roff += q.rels.target.rank
        coff += q.rels.source.rank
    rels = HomogMatrix(src, gens, ent, n_vars=sub.n_vars, p=sub.p)
    return ModulePresentation(gens, rels, None, "E")


def annihilated_by(pres: ModulePresentation, polys: list[HomogPoly], reg_bound: int) -> bool | None:
    """Whether every f in ``polys`` kills the module; None when a needed degree exceeds ``reg_bound``."""
    p, nv = pres.p, pres.n_vars
    by_deg: dict[int, list[np.ndarray]] = {}
    for f in polys:
        for g, u in enumerate(pres.gens.twists):
            nu = u + f.degree
            pt = GradedFreeModule([nu])
            vec = HomSpace(pt, pres.gens, nv, p).to_vec(HomogMatrix(pt, pres.gens, {(g, 0): f}, n_vars=nv, p=p))
            by_deg.setdefault(nu, []).append(vec)
    undecided = False
    for nu, vecs in sorted(by_deg.items()):
        if nu > reg_bound:
            undecided = True
            continue
        R = graded_piece(pres.rels, nu).dense()
        V = np.column_stack(vecs)
        if _col_rank(np.hstack([R, V]), p) != _col_rank(R, p):
            return False
    return None if undecided else True


def build_extension(sub: ModulePresentation, quots: list[ModulePresentation], cocycles: list[HomogMatrix],
                    model: DeterminantalModel | None = None, space: CocycleSpace | None = None,
                    reg_bound: int | None = None, check: bool = True) -> ExtensionPresentation:
    """Glue r-1 classes into an extension 0 -> L1 -> E -> L2^(r-1) -> 0."""
    if not quots:
        raise ValueError("need at least one quotient copy")
    notes = []
    split = all(x.is_zero() for x in cocycles)
    if check:
        space = space or cocycle_space(quots[0], sub)
        for x in cocycles:
            if not space.is_cocycle(x):
                raise ValueError("lift does not satisfy the cocycle condition")
        if not split and space.class_rank(cocycles) != len(cocycles):
            raise ValueError(f"{len(cocycles)} classes requested but they span "
                             f"{space.class_rank(cocycles)} dimensions (space has dim {space.dim})")
    E = assemble(sub, quots, cocycles)
    is_a = None
    if model is not None:
        bound = reg_bound if reg_bound is not None else model.t + model.c + REG_SLACK
        is_a = annihilated_by(E, _minor_polys(model), bound)
        if is_a is None:
            notes.append(f"I*E = 0 undecided up to degree {bound}")
    return ExtensionPresentation(sub, quots[0], list(cocycles), E, len(cocycles) + 1, is_a, split, notes)


def ulrich_check(ext: ExtensionPresentation, model: DeterminantalModel, window: tuple[int, int] | None = None) -> dict:
    """Generator count against rank * deg X and Hilbert additivity over a window of degrees."""
    lo, hi = window or (0, model.t + model.c + 2)
    k = ext.rank - 1
    additive = {}
    for nu in range(lo, hi + 1):
        lhs = ext.assembled.hilbert(nu)
        rhs = ext.sub.hilbert(nu) + k * ext.quot.hilbert(nu)
        additive[nu] = (lhs, rhs)
    mu = ext.assembled.num_generators()
    deg = degree(model.t, model.c)
    ok_add = all(a == b for a, b in additive.values())
    ok_mu = mu == ext.rank * deg
    return {"mu": mu, "expected_mu": ext.rank * deg, "generators_ok": ok_mu, "additivity_ok": ok_add,
            "hilbert": {nu: a for nu, (a, _) in additive.items()},
            "verdict": "numerically consistent" if ok_add and ok_mu else "fails"}


def ulrich_pair(model: DeterminantalModel) -> tuple[ModulePresentation, ModulePresentation]:
    """L1 = M^dual(t-1) and L2 = S_cM, the rank-one Ulrich modules of the linear case."""
    if not model.dm.is_linear:
        raise ValueError("the rank-one Ulrich pair needs the linear case")
    return presentation_of(model, "Mdual", model.t - 1), presentation_of(model, "S", j=model.c)


def section3_pair(model: DeterminantalModel) -> tuple[ModulePresentation, ModulePresentation]:
    """(sub, quot) = (M^dual(t - mu), M)."""
    return presentation_of(model, "Mdual", model.t - model.dm.mu), presentation_of(model, "M")


def extension_of_rank(model: DeterminantalModel, r: int, a_module_only: bool = True) -> ExtensionPresentation:
    """Rank-r extension of the Ulrich pair from r-1 independent measured classes; refuses if too few exist."""
    if r < 2:
        raise ValueError("rank must be at least 2")
    sub, quot = ulrich_pair(model)
    space = cocycle_space(quot, sub)
    classes = a_module_classes(space, model) if a_module_only else space.lifts()
    if len(classes) < r - 1:
        raise ValueError(f"rank {r} needs {r - 1} independent classes; only {len(classes)} available")
    return build_extension(sub, [quot] * (r - 1), classes[: r - 1], model, space)


def nonminimal(pres: ModulePresentation) -> ModulePresentation:
    """Control: add one relation equal to the first generator, so a scalar entry appears."""
    one = HomogPoly(pres.n_vars, 0, {(0,) * pres.n_vars: 1}, pres.p)
    src = GradedFreeModule(list(pres.rels.source.twists) + [pres.gens.twists[0]])
    ent = dict(pres.rels.nonzero())
    ent[(0, pres.rels.source.rank)] = one
    rels = HomogMatrix(src, pres.gens, ent, n_vars=pres.n_vars, p=pres.p)
    return ModulePresentation(pres.gens, rels, None, pres.label + "+unit")
