from __future__ import annotations

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from detrep.exactalg import (GradedFreeModule, HomogMatrix, HomogPoly, PrimeField, compose, graded_piece,
                             hilbert_dim, identity, inverse, kernel_dim, monomial_basis, monomial_count,
                             monomial_index, nullspace, random_form, rank, rank_lower_bound, solve, variable)
from detrep.exactalg.field import is_prime

P = 32003


def naive_rank(a, p):
    """Plain row reduction with Python ints."""
    m = [[int(x) % p for x in row] for row in a]
    r = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        r += 1
    return r


def low_rank(rng, rows, cols, r, p=P):
    a = rng.integers(0, p, size=(rows, r))
    b = rng.integers(0, p, size=(r, cols))
    return (a.astype(object) @ b.astype(object) % p).astype(np.int64)


def test_field_validation(monkeypatch):
    assert is_prime(32003) and not is_prime(32001)
    with pytest.raises(ValueError):
        PrimeField(32001)
    with pytest.raises(ValueError):
        PrimeField(2 ** 31 - 1)
    assert PrimeField(7).inv(3) * 3 % 7 == 1
    monkeypatch.setenv("DETREP_PRIME", "101")
    from detrep.exactalg import default_prime
    assert default_prime() == 101


def test_monomial_order_and_index():
    basis = monomial_basis(3, 2)
    assert basis[0] == (2, 0, 0) and len(basis) == monomial_count(3, 2) == 6
    idx = monomial_index(np.array(basis), 2)
    assert idx.tolist() == list(range(6))
    assert monomial_count(4, -1) == 0


def test_poly_arithmetic_small():
    x, y = variable(2, 0, P), variable(2, 1, P)
    f = (x + y) * (x - y)
    assert f == x * x - y * y
    assert (f - f).is_zero() and (f - f).degree == 2
    with pytest.raises(ValueError):
        x + x * y


forms = st.tuples(st.integers(0, 3), st.integers(0, 2 ** 32 - 1))


@settings(max_examples=40, deadline=None)
@given(forms, forms, forms)
def test_poly_ring_axioms(a, b, c):
    rng = np.random.default_rng
    f = random_form(3, a[0], rng(a[1]), P)
    g = random_form(3, b[0], rng(b[1]), P)
    h = random_form(3, a[0], rng(c[1]), P)
    assert f * g == g * f
    assert (f + h) * g == f * g + h * g
    assert f - f == f.scale(0)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2 ** 32 - 1))
def test_rank_matches_naive(rows, cols, seed):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(0, min(rows, cols) + 1))
    a = low_rank(rng, rows, cols, r)
    assert rank(a, P) == naive_rank(a.tolist(), P) == r


@pytest.mark.parametrize("shape,r", [((420, 380), 300), ((350, 700), 341), ((900, 650), 650)])
def test_blocked_rank_known(shape, r):
    rng = np.random.default_rng(7)
    a = low_rank(rng, *shape, r)
    assert rank(a, P) == r
    assert rank(sp.csr_matrix(a), P) == r


def test_rank_lower_bound_is_lower():
    rng = np.random.default_rng(3)
    a = low_rank(rng, 60, 50, 20)
    assert rank_lower_bound(a, P, np.random.default_rng(0)) <= 20


def test_nullspace_solve_inverse():
    rng = np.random.default_rng(5)
    a = low_rank(rng, 8, 12, 5)
    n = nullspace(a, P)
    assert n.shape == (12, 7) and not ((a @ n) % P).any()
    assert kernel_dim(a, P) == 7
    x = rng.integers(0, P, size=12)
    b = a @ x % P
    y = solve(a, b, P)
    assert y is not None and not ((a @ y - b) % P).any()
    e = np.zeros(8, dtype=np.int64)
    e[0] = 1
    full = low_rank(rng, 8, 8, 8)
    inv = inverse(full, P)
    assert ((full.astype(object) @ inv.astype(object)) % P == np.eye(8, dtype=object)).all()


def test_graded_free_module_ops():
    f = GradedFreeModule([0, 1, 1])
    assert f.shift(2).twists == (-2, -1, -1)
    assert f.dual(0).twists == (0, -1, -1)
    assert hilbert_dim(f, 1, 3) == 3 + 1 + 1
    assert hilbert_dim(f, -1, 3) == 0


def test_degree_checked():
    x = variable(3, 0, P)
    with pytest.raises(ValueError):
        HomogMatrix(GradedFreeModule([2]), GradedFreeModule([0]), {(0, 0): x}, n_vars=3, p=P)


def _random_map(src, tgt, rng, nv=3):
    ent = {}
    for i, v in enumerate(tgt.twists):
        for j, u in enumerate(src.twists):
            if u - v >= 0:
                ent[(i, j)] = random_form(nv, u - v, rng, P)
    return HomogMatrix(src, tgt, ent, n_vars=nv, p=P)


twist_lists = st.lists(st.integers(0, 2), min_size=1, max_size=3)


@settings(max_examples=30, deadline=None)
@given(twist_lists, twist_lists, twist_lists, st.integers(0, 5), st.integers(0, 2 ** 32 - 1))
def test_graded_piece_is_functorial(t0, t1, t2, nu, seed):
    rng = np.random.default_rng(seed)
    X = GradedFreeModule([u + 2 for u in t0])
    Y = GradedFreeModule([u + 1 for u in t1])
    Z = GradedFreeModule(t2)
    b = _random_map(X, Y, rng)
    a = _random_map(Y, Z, rng)
    lhs = graded_piece(compose(a, b), nu).dense()
    rhs = (graded_piece(a, nu).dense().astype(object) @ graded_piece(b, nu).dense().astype(object)) % P
    assert (lhs == rhs).all()


def test_identity_piece():
    f = GradedFreeModule([0, 1])
    pc = graded_piece(identity(f, 3, P), 2).dense()
    assert (pc == np.eye(pc.shape[0], dtype=np.int64)).all()


def test_transpose_dual_of_constants():
    # for a scalar matrix between modules of one twist the dual piece is the transpose
    one = HomogPoly(2, 0, {(0, 0): 3}, P)
    m = HomogMatrix(GradedFreeModule([1, 1]), GradedFreeModule([1]), {(0, 1): one}, n_vars=2, p=P)
    a = graded_piece(m, 1).dense()
    b = graded_piece(m.transpose_dual(0), -1).dense()
    assert (a.T == b).all()
