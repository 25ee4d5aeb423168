"""Degree data, generic homogeneous matrices and the arithmetic around them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb

import numpy as np

from .exactalg import GradedFreeModule, HomogMatrix, HomogPoly, PrimeField, default_prime, random_form
from .exactalg.poly import poly_mul, zero_poly

MAX_LAPLACE_T = 6


@dataclass(frozen=True)
class DegreeMatrix:
    """Twists of phi: F = sum R(-a_j) -> G = sum R(-b_i).

    ``b`` is non-increasing of length t, ``a`` non-increasing of length t+c-1.
    """

    t: int
    c: int
    b: tuple[int, ...]
    a: tuple[int, ...]

    def __init__(self, t: int, c: int, b=None, a=None):
        b = tuple(int(x) for x in (b if b is not None else [0] * t))
        a = tuple(int(x) for x in (a if a is not None else [1] * (t + c - 1)))
        object.__setattr__(self, "t", int(t))
        object.__setattr__(self, "c", int(c))
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a", a)
        if t < 1 or c < 1:
            raise ValueError("need t >= 1 and c >= 1")
        if len(b) != t or len(a) != t + c - 1:
            raise ValueError(f"need {t} row twists and {t + c - 1} column twists")
        if list(b) != sorted(b, reverse=True) or list(a) != sorted(a, reverse=True):
            raise ValueError("degree data must be non-increasing")

    @classmethod
    def linear(cls, t: int, c: int) -> "DegreeMatrix":
        return cls(t, c, [0] * t, [1] * (t + c - 1))

    @property
    def is_linear(self) -> bool:
        return all(x == 0 for x in self.b) and all(x == 1 for x in self.a)

    @property
    def ell(self) -> int:
        return sum(self.a) - sum(self.b)

    @property
    def mu(self) -> int:
        # a and b are 1-indexed in the usual statement; a[c:] is a_{c+1}..a_{t+c-1}
        return self.t + 1 - sum(self.a[self.c:]) + sum(self.b) + self.b[0]

    @property
    def mu1(self) -> int | None:
        a, b, c = self.a, self.b, self.c
        if self.t == 2:
            return 2 - a[c] + 2 * b[0] + b[1]
        if self.t == 3:
            return 3 - a[c] - a[c + 1] + 2 * b[0] + b[1] + b[2]
        return None


@dataclass(frozen=True)
class HypothesisReport:
    main_inequality: bool
    column_bounds: bool
    side_t3: bool | None
    side_t4: bool | None
    t2_boundary: bool | None
    alpha: int | None
    alpha_ok: bool | None
    a_greater_b: bool
    a_greater_b_gap: bool
    dim_ok: bool
    verdict: str

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def hypothesis_check(dm: DegreeMatrix, n: int) -> HypothesisReport:
    """Numeric hypotheses of the wildness theorem; pure arithmetic in (dm, n)."""
    t, c, a, b = dm.t, dm.c, dm.a, dm.b
    main = sum(a[c:]) > 1 + sum(b[: t - 1]) + b[0] - b[t - 1]
    if c >= 2:
        cols = all(a[c + i] >= b[i] for i in range(t - 1))
    else:
        cols = all(a[c + i] > b[i] for i in range(t - 1))
    low = t >= 2 and a[c] <= 1 + b[0]
    side3 = (a[c + 1] > b[0]) if (t == 3 and low) else None
    side4 = (a[c + 2] > b[0]) if (t >= 4 and low) else None
    t2 = alpha = alpha_ok = None
    if t == 2:
        t2 = a[c] == 1 + 2 * b[0] - b[1]
        alpha = sum(1 for x in a[: c + 1] if x == a[c])
        alpha_ok = (2 * alpha <= n - 2) if a[c] == 1 + b[0] else True
    agb = a[-1] > b[0]
    gap = b[t - 2] - b[t - 1] <= max(0, t - 3) if t >= 2 else True
    dim_ok = n - c >= 2
    side_ok = side3 is not False and side4 is not False
    if t >= 2 and dim_ok and main and cols and side_ok:
        verdict = "wildness theorem applies"
    elif t == 2 and dim_ok and t2 and alpha_ok:
        verdict = "t=2 boundary case"
    elif t == 3 and dim_ok and main and cols and side3 is False:
        verdict = "t=3 boundary case"
    else:
        verdict = "no theorem applies"
    return HypothesisReport(main, cols, side3, side4, t2, alpha, alpha_ok, agb, gap, dim_ok, verdict)


@dataclass
class DeterminantalModel:
    dm: DegreeMatrix
    n: int
    field: PrimeField
    seed: int
    phi: HomogMatrix

    @property
    def d(self) -> int:
        return self.n - self.dm.c

    @property
    def n_vars(self) -> int:
        return self.n + 1

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def t(self) -> int:
        return self.dm.t

    @property
    def c(self) -> int:
        return self.dm.c

    @property
    def F(self) -> GradedFreeModule:
        return self.phi.source

    @property
    def G(self) -> GradedFreeModule:
        return self.phi.target

    @property
    def canonical_twist(self) -> int | None:
        """s with K_X = S_{c-1}M(s) in the linear case."""
        if not self.dm.is_linear:
            return None
        return self.t + self.c - self.n - 2

    def entry(self, i: int, j: int) -> HomogPoly:
        return self.phi.entry(i, j)

    @cached_property
    def _minor_cache(self) -> dict:
        return {}

    def minor(self, cols: tuple[int, ...]) -> HomogPoly:
        """det of the t x t submatrix on the given (sorted) columns."""
        return _laplace(self, tuple(range(self.t)), tuple(cols), self._minor_cache)

    def restrict(self, lam) -> "DeterminantalModel":
        """phi restricted to the hyperplane x_n = sum lam_j x_j."""
        return DeterminantalModel(self.dm, self.n - 1, self.field, self.seed, self.phi.substitute_last(lam))


def _laplace(model: DeterminantalModel, rows: tuple, cols: tuple, cache: dict) -> HomogPoly:
    key = (rows, cols)
    if key in cache:
        return cache[key]
    if len(rows) == 1:
        out = model.entry(rows[0], cols[0])
    else:
        r0, rest = rows[0], rows[1:]
        out = None
        for k, col in enumerate(cols):
            term = poly_mul(model.entry(r0, col), _laplace(model, rest, cols[:k] + cols[k + 1:], cache))
            if k % 2:
                term = -term
            out = term if out is None else out + term
        deg = sum(model.dm.a[j] for j in cols) - sum(model.dm.b[i] for i in rows)
        if out.is_zero():
            out = zero_poly(model.n_vars, deg, model.p)
    cache[key] = out
    return out


def new_model(dm: DegreeMatrix, n: int, field: PrimeField | None = None, seed: int = 1) -> DeterminantalModel:
    """A generic phi with the given degree data; deterministic in ``seed``."""
    if n < dm.c:
        raise ValueError(f"need n >= c (got n={n}, c={dm.c})")
    field = field or PrimeField(default_prime())
    rng = np.random.default_rng(seed)
    n_vars = n + 1
    F = GradedFreeModule(dm.a)
    G = GradedFreeModule(dm.b)
    ent = {}
    for i in range(dm.t):
        for j in range(dm.t + dm.c - 1):
            deg = dm.a[j] - dm.b[i]
            if deg >= 0:
                ent[(i, j)] = random_form(n_vars, deg, rng, field.p)
    phi = HomogMatrix(F, G, ent, n_vars=n_vars, p=field.p)
    return DeterminantalModel(dm, n, field, seed, phi)


def model_from_matrix(dm: DegreeMatrix, n: int, phi: HomogMatrix, seed: int = 0) -> DeterminantalModel:
    """Wrap a hand-made phi (e.g. a deliberately degenerate one)."""
    return DeterminantalModel(dm, n, PrimeField(phi.p), seed, phi)


def maximal_minors(model: DeterminantalModel) -> list[HomogPoly]:
    """All t x t minors, column subsets in lex order."""
    t = model.t
    if t > MAX_LAPLACE_T:
        raise ValueError(f"t={t} exceeds the Laplace bound {MAX_LAPLACE_T}")
    return [model.minor(T) for T in combinations(range(t + model.c - 1), t)]


def degree(t: int, c: int) -> int:
    return comb(t + c - 1, c)


def betti(t: int, c: int) -> list[int]:
    """Ranks rho_1..rho_c of the linear resolution of the ideal's quotient."""
    return [comb(c + t - 1, i + t - 1) * comb(i + t - 2, t - 1) for i in range(1, c + 1)]


def curve_genus(t: int, n: int) -> int:
    return sum((i - 1) * comb(n + i - 2, i) for i in range(1, t))


def invariants(model: DeterminantalModel) -> dict:
    dm = model.dm
    out = {"ell": dm.ell, "mu": dm.mu, "mu1": dm.mu1}
    if dm.is_linear:
        out["degree"] = degree(dm.t, dm.c)
        out["rho"] = betti(dm.t, dm.c)
        if model.d == 1:
            out["genus"] = curve_genus(dm.t, model.n)
    return out


def genus(model: DeterminantalModel) -> int:
    if model.d != 1:
        raise ValueError("arithmetic genus is only defined here for curves (n - c = 1)")
    if not model.dm.is_linear:
        raise ValueError("genus formula needs the linear case")
    return curve_genus(model.t, model.n)
