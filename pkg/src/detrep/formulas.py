"""Closed-form arithmetic: f/g/h, Euler-characteristic bounds, curve and hypersurface counts,
the table of triples with nonvanishing Ext^1, and representation-type verdicts.

Everything is exact integer (or Fraction) arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .model import betti, curve_genus, degree

__all__ = [
    "fgh", "fgh_sum", "fgh_closed", "ChiBound", "chi_bound", "chi_bounds", "wild_polynomial",
    "wild_criterion", "ext1_c1", "curve_chi", "curve_chi_rr", "t3_chi", "family_dim_bound",
    "TABLE", "format_row", "table_contains", "reproduce_table", "table_boundary_failures", "EXCEPTIONS",
    "Verdict", "verdict", "degree", "betti", "curve_genus",
]


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    return factorial(n)


def _exact(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"closed form not integral: {num}/{den}")
    return q


def fgh_sum(t: int, c: int) -> tuple[int, int, int]:
    """f, g, h as alternating sums of ranks in the dualized resolution."""
    if t < 2 or c < 1:
        raise ValueError("need t >= 2, c >= 1")
    N = t + c - 1
    base = [comb(N, t - i - 1) * comb(N - i, t - 1) for i in range(t)]
    f = sum((-1) ** i * base[i] * comb(c + 2 + i, i) for i in range(t))
    g = sum((-1) ** i * base[i] * comb(c + 1 + i, i - 1) for i in range(1, t))
    h = sum((-1) ** i * base[i] * comb(c + i, i - 2) for i in range(2, t))
    return f, g, h


def fgh_closed(t: int, c: int) -> tuple[int, int, int]:
    if t < 2 or c < 1:
        raise ValueError("need t >= 2, c >= 1")
    top = _fact(c + t - 1)
    den = 2 * _fact(2 + c)
    f = _exact((4 + 12 * c + 8 * c * c - 5 * c * t - 7 * c * c * t - c * t * t + c * c * t * t) * top,
               den * _fact(t - 1))
    g = _exact(c * (-2 - 4 * c - t + c * t) * top, den * _fact(t - 2))
    h = 0 if t == 2 else _exact((c * c - c) * top, den * _fact(t - 3))
    return f, g, h


def fgh(t: int, c: int) -> dict:
    """Both evaluations; they must agree."""
    s, cl = fgh_sum(t, c), fgh_closed(t, c)
    return {"sum": s, "closed": cl, "agree": s == cl}


@dataclass(frozen=True)
class ChiBound:
    t: int
    c: int
    d: int
    values: dict
    exact: bool  # the bound is an equality (d = 2 or t <= 3)


def chi_bounds(t: int, c: int, d: int) -> ChiBound:
    if min(t, c, d) < 2:
        raise ValueError("need t, c, d >= 2")
    f, g, h = fgh_closed(t, c)
    vals = {0: comb(d - 1, 2) * h + (d - 2) * g + f, -1: (d - 2) * h + g, -2: h}
    return ChiBound(t, c, d, vals, d == 2 or t <= 3)


def chi_bound(t: int, c: int, d: int, nu: int = 0) -> int:
    if nu not in (0, -1, -2):
        raise ValueError("nu must be 0, -1 or -2")
    return chi_bounds(t, c, d).values[nu]


def wild_polynomial(t: int, c: int, d: int) -> int:
    """Positive multiple of chi_bound(t, c, d, 0) with the factorials cleared."""
    return (comb(d - 1, 2) * (c * c - c) * (t - 1) * (t - 2)
            + (d - 2) * c * (c * t - 2 - 4 * c - t) * (t - 1)
            + (4 + 12 * c + 8 * c * c - 5 * c * t - 7 * c * c * t - c * t * t + c * c * t * t))


def wild_criterion(t: int, c: int, d: int) -> bool:
    if min(t, c, d) < 2:
        raise ValueError("need t, c, d >= 2")
    return wild_polynomial(t, c, d) < 0


def t3_chi(c: int, n: int) -> int:
    """chi at nu = 0 for t = 3 written in (c, n)."""
    return comb(c, 2) * comb(n + 2, 2) - (c + 2) * comb(c + 1, 2) * (n + 1) + comb(c + 2, 2) ** 2


def ext1_c1(t: int, n: int) -> int:
    """dim Ext^1 between the two rank-one Ulrich modules of a determinantal hypersurface."""
    if t < 2 or n < 3:
        raise ValueError("need t >= 2, n >= 3")
    return comb(t, 2) * (n + 1) - t * t


def curve_chi_rr(t: int, n: int) -> int:
    """Riemann-Roch form: degree of the twist plus 1 - p_a."""
    return (-n * comb(t + n - 1, n) + (n + t - 1) * comb(t + n - 2, n - 1) + 1 - curve_genus(t, n))


def curve_chi(t: int, n: int) -> tuple[int, int]:
    """(chi, cubic upper bound) for a linear determinantal curve in P^n."""
    if t < 3 or n < 3:
        raise ValueError("need t >= 3, n >= 3")
    chi = Fraction((-1 - n * (t - 2) + t) * _fact(n + t - 2), _fact(n) * _fact(t - 1))
    bound = Fraction(t * (5 + 3 * t - 2 * t * t), 6)
    if chi.denominator != 1 or bound.denominator != 1:
        raise ArithmeticError("non-integral curve Euler characteristic")
    return int(chi), int(bound)


def family_dim_bound(r: int, s: int) -> tuple[int, Fraction]:
    """Lower bound for the dimension of the rank-r families built from an s-dimensional Ext^1
    (r even): the explicit count and its linear simplification."""
    if r % 2:
        raise ValueError("rank must be even")
    q = r // 2
    return (q - 1) * (s - 3) + q * (s - 1), Fraction(r, 2) * (s - 1)


# ---------------------------------------------------------------------------
# the printed table of triples (t, c, d) with chi_bound(t, c, d, 0) < 0
# each field is ("eq", v), ("le", v) or ("any",)

TABLE: list[tuple[tuple, tuple, tuple]] = [
    (("eq", 2), ("any",), ("any",)),
    (("eq", 3), ("eq", 2), ("le", 16)),
    (("eq", 3), ("eq", 3), ("le", 10)),
    (("eq", 3), ("le", 4), ("eq", 8)),
    (("eq", 3), ("le", 5), ("eq", 7)),
    (("eq", 3), ("le", 8), ("eq", 6)),
    (("eq", 3), ("le", 26), ("eq", 5)),
    (("eq", 3), ("any",), ("le", 4)),
    (("eq", 4), ("le", 23), ("eq", 3)),
    (("eq", 5), ("le", 5), ("eq", 3)),
    (("eq", 6), ("le", 3), ("eq", 3)),
    (("le", 9), ("eq", 2), ("eq", 3)),
    (("eq", 4), ("le", 5), ("eq", 4)),
    (("eq", 5), ("le", 3), ("eq", 4)),
    (("eq", 6), ("eq", 2), ("eq", 4)),
    (("eq", 4), ("le", 3), ("eq", 5)),
    (("eq", 5), ("eq", 2), ("eq", 5)),
    (("eq", 4), ("eq", 2), ("le", 8)),
    (("le", 17), ("eq", 2), ("eq", 2)),
    (("le", 11), ("eq", 3), ("eq", 2)),
    (("le", 9), ("eq", 4), ("eq", 2)),
    (("le", 8), ("eq", 5), ("eq", 2)),
    (("le", 7), ("le", 8), ("eq", 2)),
    (("le", 6), ("le", 26), ("eq", 2)),
    (("le", 5), ("any",), ("eq", 2)),
]

# triples of the table where chi = -1 or -2, so Ext^1 may be only 1 or 2 dimensional
EXCEPTIONS = {(2, 2, 2): -1, (2, 3, 2): -2, (3, 2, 16): -2}


def _match(spec: tuple, v: int) -> bool:
    if spec[0] == "any":
        return True
    if spec[0] == "eq":
        return v == spec[1]
    return v <= spec[1]


def table_contains(t: int, c: int, d: int) -> bool:
    if min(t, c, d) < 2:
        return False
    return any(_match(rt, t) and _match(rc, c) and _match(rd, d) for rt, rc, rd in TABLE)


def _fmt(spec: tuple, name: str) -> str:
    if spec[0] == "any":
        return "any"
    if spec[0] == "eq":
        return str(spec[1])
    return f"{name}<={spec[1]}"


def format_row(row: tuple) -> str:
    return " | ".join(_fmt(s, n) for s, n in zip(row, ("t", "c", "d")))


def _extent(fixed: dict, free: str, cap: int):
    """Largest value of the free variable (from 2) keeping the criterion; 'any' if it reaches cap."""
    last = None
    for v in range(2, cap + 1):
        args = dict(fixed, **{free: v})
        if wild_criterion(args["t"], args["c"], args["d"]):
            last = v
        else:
            break
    if last == cap:
        return ("any",)
    return ("le", last) if last is not None else None


def reproduce_table(cap: int = 120) -> list[tuple]:
    """Recompute every row of the table from the criterion alone.

    For each row the fixed coordinates are kept and the open one is pushed as
    far as the criterion allows; a row whose open coordinate is already free
    ("any" in a second slot) takes the minimum of the extents over the other
    slot up to ``cap``.
    """
    out = []
    for row in TABLE:
        names = ("t", "c", "d")
        fixed = {n: s[1] for n, s in zip(names, row) if s[0] == "eq"}
        open_ = [n for n, s in zip(names, row) if s[0] != "eq"]
        new = list(row)
        if len(open_) == 1:
            k = open_[0]
            new[names.index(k)] = _extent(fixed, k, cap)
        elif len(open_) == 2:
            # one slot is "any", the other is bounded uniformly
            anyk = [n for n in open_ if row[names.index(n)][0] == "any"]
            bounded = [n for n in open_ if row[names.index(n)][0] != "any"]
            if len(anyk) == 2:
                ok = all(wild_criterion(**dict(fixed, **{open_[0]: u, open_[1]: v}))
                         for u in range(2, 40) for v in range(2, 40))
                new = list(row) if ok else [None] * 3
            elif not anyk:
                # a rectangle: each side is the extent at the far edge of the other
                u, v = open_
                U, V = row[names.index(u)][1], row[names.index(v)][1]
                inside = all(wild_criterion(**dict(fixed, **{u: x, v: y}))
                             for x in range(2, U + 1) for y in range(2, V + 1))
                if inside:
                    new[names.index(u)] = _extent(dict(fixed, **{v: V}), u, cap)
                    new[names.index(v)] = _extent(dict(fixed, **{u: U}), v, cap)
                else:
                    new = [None] * 3
            else:
                a, bnd = anyk[0], bounded[0]
                ext = [_extent(dict(fixed, **{a: u}), bnd, cap) for u in range(2, cap + 1)]
                vals = [e[1] if e and e[0] == "le" else cap for e in ext]
                new[names.index(bnd)] = ("le", min(vals))
        out.append(tuple(new))
    return out


def table_boundary_failures(cap: int = 120) -> list[tuple]:
    """For each bounded coordinate, a triple one step past the bound that fails the criterion.

    Returns (row, failing triple or None); None means no failure was found."""
    names = ("t", "c", "d")
    res = []
    for row in TABLE:
        for k, spec in zip(names, row):
            if spec[0] != "le":
                continue
            # the other bounded slot (if any) sits at its bound
            fixed = {n: s[1] for n, s in zip(names, row) if s[0] != "any" and n != k}
            others = [n for n, s in zip(names, row) if s[0] == "any"]
            found = None
            ranges = [range(2, cap + 1)] if others else [[None]]
            for u in ranges[0]:
                args = dict(fixed, **{k: spec[1] + 1})
                if others:
                    args[others[0]] = u
                if not wild_criterion(args["t"], args["c"], args["d"]):
                    found = (args["t"], args["c"], args["d"])
                    break
            res.append((row, found))
    return res


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    classification: str   # finite | tame | Ulrich-wild | wild | unknown
    justification: str

    def __str__(self):
        return f"{self.classification} ({self.justification})"


def verdict(t: int, c: int, n: int) -> Verdict:
    """Representation type of a general linear determinantal scheme in P^n."""
    if t < 1 or c < 1 or n <= c:
        raise ValueError("need t >= 1, c >= 1, n > c")
    d = n - c
    if t == 1:
        return Verdict("finite", "linear subspace P^{n-c}")
    if d == 1:
        if t == 2:
            return Verdict("finite", "rational normal curve")
        return Verdict("Ulrich-wild", "curve with t >= 3: Ext^1 >= 2 by Riemann-Roch")
    if (t, c, d) == (2, 2, 2):
        return Verdict("finite", "cubic scroll in P^4")
    if (t, c, d) == (2, 3, 2):
        return Verdict("tame", "quartic scroll in P^5")
    if t == 2 and d == 2 and c > 3:
        return Verdict("Ulrich-wild", "t = 2, d = 2, c > 3: chi = c+1-cd < -2")
    if t == 2 and d > 2 and c >= 2:
        return Verdict("Ulrich-wild", "t = 2, d > 2: chi = c+1-cd < -2")
    if c == 1 and t == 2 and n > 5:
        return Verdict("Ulrich-wild", "hypersurface: Ext^1 = n - 3 > 2")
    if c == 1 and t > 2 and n > 2:
        return Verdict("Ulrich-wild", "hypersurface: Ext^1 = C(t,2)(n+1) - t^2 >= 3")
    if t == 3 and c >= 2 and (n <= 12 or -t3_chi(c, n) > 2):
        return Verdict("Ulrich-wild", "t = 3: -chi > 2" if n > 12 else "t = 3 and n <= 12")
    if table_contains(t, c, d) and (t, c, d) not in EXCEPTIONS:
        return Verdict("Ulrich-wild", "tabulated triple with chi < -2")
    if t > 2 and d >= 2:
        return Verdict("wild", "iterated extensions of rank-one ACM modules (t > 2)")
    return Verdict("unknown", "conjectured Ulrich-wild")
