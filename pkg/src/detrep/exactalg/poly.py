"""Homogeneous polynomials over GF(p) with a sparse exponent -> coefficient map.

Monomials of a fixed degree are ordered graded-lexicographically with
``x0**d`` first; :func:`monomial_index` ranks exponent arrays in that order
without building dictionaries, which keeps graded pieces cheap to assemble.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Mapping

import numpy as np


@lru_cache(maxsize=None)
def _basis_array(n_vars: int, d: int) -> np.ndarray:
    if d < 0:
        return np.zeros((0, n_vars), dtype=np.int64)
    out = np.zeros((comb(n_vars - 1 + d, d), n_vars), dtype=np.int64)
    for row, combo in enumerate(combinations_with_replacement(range(n_vars), d)):
        for v in combo:
            out[row, v] += 1
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _basis_keys(n_vars: int, d: int) -> np.ndarray:
    # keys decrease strictly along the basis, so the negated keys are sorted
    keys = -_encode(_basis_array(n_vars, d), d)
    keys.setflags(write=False)
    return keys


def _encode(exps: np.ndarray, d: int) -> np.ndarray:
    base = d + 1
    n_vars = exps.shape[1]
    weights = base ** np.arange(n_vars - 1, -1, -1, dtype=np.int64)
    return exps @ weights


def monomial_basis(n_vars: int, d: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree ``d``, graded-lex with x0**d first."""
    if n_vars < 1:
        raise ValueError("n_vars must be >= 1")
    return [tuple(int(e) for e in row) for row in _basis_array(n_vars, d)]


def monomial_count(n_vars: int, d: int) -> int:
    return comb(n_vars - 1 + d, d) if d >= 0 else 0


def monomial_index(exps: np.ndarray, d: int) -> np.ndarray:
    """Positions of the rows of ``exps`` (all of degree ``d``) in the basis."""
    exps = np.atleast_2d(exps)
    keys = -_encode(exps, d)
    return np.searchsorted(_basis_keys(exps.shape[1], d), keys)


class HomogPoly:
    """A homogeneous polynomial in ``n_vars`` variables over GF(p).

    ``terms`` maps exponent tuples to nonzero coefficients in ``range(p)``.
    The zero polynomial keeps the degree of the slot it occupies.
    """

    __slots__ = ("n_vars", "degree", "p", "_terms")

    def __init__(self, n_vars: int, degree: int, terms: Mapping[tuple, int], p: int):
        clean = {}
        for e, v in terms.items():
            v %= p
            if v:
                if len(e) != n_vars or sum(e) != degree:
                    raise ValueError(f"exponent {e} does not have degree {degree}")
                clean[tuple(int(x) for x in e)] = v
        self.n_vars = n_vars
        self.degree = degree
        self.p = p
        self._terms = clean

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, HomogPoly):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return (self.n_vars, self.degree, self.p, self._terms) == (
            other.n_vars, other.degree, other.p, other._terms)

    def __hash__(self):
        return hash((self.n_vars, self.degree, frozenset(self._terms.items())))

    def __repr__(self):
        if self.is_zero():
            return f"HomogPoly(0, deg={self.degree})"
        parts = []
        for e, v in sorted(self._terms.items(), reverse=True):
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"{v}*{mono}" if mono else str(v))
        return " + ".join(parts)

    # arithmetic ---------------------------------------------------------
    def _check(self, other: "HomogPoly"):
        if self.n_vars != other.n_vars:
            raise ValueError("variable-count mismatch")
        if self.p != other.p:
            raise ValueError("field mismatch")

    def __add__(self, other: "HomogPoly") -> "HomogPoly":
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degrees")
        out = dict(self._terms)
        for e, v in other._terms.items():
            out[e] = (out.get(e, 0) + v) % self.p
        return HomogPoly(self.n_vars, self.degree, out, self.p)

    def __neg__(self) -> "HomogPoly":
        return self.scale(-1)

    def __sub__(self, other: "HomogPoly") -> "HomogPoly":
        return self + (-other)

    def scale(self, a: int) -> "HomogPoly":
        a %= self.p
        return HomogPoly(self.n_vars, self.degree,
                         {e: v * a for e, v in self._terms.items()}, self.p)

    def __mul__(self, other):
        if isinstance(other, HomogPoly):
            return poly_mul(self, other)
        return self.scale(int(other))

    __rmul__ = __mul__

    def with_degree(self, degree: int) -> "HomogPoly":
        """The same polynomial re-labelled with a slot degree (zero only)."""
        if not self.is_zero() and degree != self.degree:
            raise ValueError("only the zero polynomial can change degree")
        return HomogPoly(self.n_vars, degree, {}, self.p) if self.is_zero() else self

    def substitute_last(self, lam) -> "HomogPoly":
        """Restrict to the hyperplane x_last = sum_j lam[j] x_j (one variable fewer)."""
        p = self.p
        m = self.n_vars - 1
        out: dict[tuple, int] = {}
        lin = {tuple(1 if i == j else 0 for i in range(m)): int(lam[j]) % p for j in range(m)}
        lin_poly = HomogPoly(m, 1, lin, p)
        powers = [HomogPoly(m, 0, {(0,) * m: 1}, p)]
        for e, v in self._terms.items():
            k = e[-1]
            while len(powers) <= k:
                powers.append(poly_mul(powers[-1], lin_poly))
            head = e[:-1]
            for pe, pv in powers[k].items():
                key = tuple(a + b for a, b in zip(head, pe))
                out[key] = (out.get(key, 0) + v * pv) % p
        return HomogPoly(m, self.degree, out, p)


def zero_poly(n_vars: int, degree: int, p: int) -> HomogPoly:
    return HomogPoly(n_vars, degree, {}, p)


def constant(n_vars: int, value: int, p: int) -> HomogPoly:
    return HomogPoly(n_vars, 0, {(0,) * n_vars: value}, p)


def variable(n_vars: int, i: int, p: int) -> HomogPoly:
    e = [0] * n_vars
    e[i] = 1
    return HomogPoly(n_vars, 1, {tuple(e): 1}, p)


def poly_mul(f: HomogPoly, g: HomogPoly) -> HomogPoly:
    f._check(g)
    p = f.p
    deg = f.degree + g.degree
    if f.is_zero() or g.is_zero():
        return zero_poly(f.n_vars, deg, p)
    out: dict[tuple, int] = {}
    for e1, v1 in f.items():
        for e2, v2 in g.items():
            key = tuple(a + b for a, b in zip(e1, e2))
            out[key] = (out.get(key, 0) + v1 * v2) % p
    return HomogPoly(f.n_vars, deg, out, p)


def random_form(n_vars: int, d: int, rng: np.random.Generator, p: int) -> HomogPoly:
    """A form whose coefficients are i.i.d. uniform on GF(p), one draw per monomial."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    basis = _basis_array(n_vars, d)
    coeffs = rng.integers(0, p, size=len(basis))
    return HomogPoly(n_vars, d, {tuple(int(x) for x in row): int(v)
                                 for row, v in zip(basis, coeffs)}, p)
