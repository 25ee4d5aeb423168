from __future__ import annotations

import numpy as np
import pytest

from detrep.acceptance import mutate
from detrep.complexes import (build_C, build_D, dualize, euler_characteristic, homology_dim,
                              homology_upper_bounds, left_strand_rank, sampled_exactness, verify_d_squared,
                              wedge_sym_rank)
from detrep.exactalg import graded_piece, rank
from detrep.model import DegreeMatrix, maximal_minors, new_model


def lin(t, c, n, seed=1):
    return new_model(DegreeMatrix.linear(t, c), n, seed=seed)


@pytest.mark.parametrize("t,c,n", [(2, 1, 3), (2, 2, 4), (3, 2, 4), (2, 3, 4), (3, 3, 4)])
def test_d_squared_all_complexes(t, c, n):
    m = lin(t, c, n)
    for i in range(-1, c + 1):
        assert verify_d_squared(build_D(m, i))
    for i in range(0, 2 * c + 2):
        assert verify_d_squared(build_C(m, i))


def test_d_squared_nonlinear():
    m = new_model(DegreeMatrix(2, 2, [1, 0], [2, 2, 1]), 4, seed=3)
    for i in range(-1, 3):
        assert verify_d_squared(build_D(m, i))


def test_mutation_breaks_d_squared():
    m = lin(2, 2, 4)
    for cx in (build_C(m, 2), build_D(m, 0), build_D(m, -1)):
        cx.differentials[0] = mutate(cx.differentials[0])
        assert not verify_d_squared(cx)


@pytest.mark.parametrize("t,c", [(2, 2), (3, 2), (2, 3), (4, 3)])
def test_ranks_are_binomial_counts(t, c):
    m = lin(t, c, c + 1)
    for i in range(0, 2 * c + 1):
        ranks = build_C(m, i).ranks()
        assert ranks == [wedge_sym_rank(t, c, i, k) for k in range(len(ranks))]
    for i in range(-1, c):
        cx = build_D(m, i)
        right = [wedge_sym_rank(t, c, i, k) for k in range(i + 1)] if i >= 0 else []
        left = [left_strand_rank(t, c, i, l) for l in range(c - i)]
        assert cx.ranks() == right + left


def test_d_minus_one_shape():
    cx = build_D(lin(2, 2, 4), -1)
    assert cx.ranks() == [3, 6, 3]
    assert cx.modules[0].twists == (1, 1, 1)


def test_eagon_northcott_first_map_is_minors():
    m = lin(2, 2, 4)
    d = build_D(m, 0).differentials[0]
    got = [d.entry(0, j) for j in range(d.shape[1])]
    mins = maximal_minors(m)
    assert all(g == f or g == -f for g, f in zip(got, mins))


def test_dualize_is_an_involution():
    cx = build_D(lin(2, 2, 4), 0)
    back = dualize(dualize(cx, 3), 3)
    assert not back.cochain
    assert [m.twists for m in back.modules] == [m.twists for m in cx.modules]
    assert all(a == b for a, b in zip(back.differentials, cx.differentials))


@pytest.mark.parametrize("t,c,n", [(2, 2, 4), (3, 2, 4), (2, 3, 5)])
def test_exactness_small(t, c, n):
    m = lin(t, c, n)
    for i in range(-1, c + 1):
        rep = sampled_exactness(build_D(m, i), (0, t + c + 2))
        assert rep.clean, rep.failures


def test_bounds_agree_with_direct_on_small_case():
    cx = build_C(lin(2, 2, 4), 3)
    bounds = homology_upper_bounds(cx, 5, limit=0)
    for (k, nu), b in bounds.items():
        assert b >= homology_dim(cx, k, nu)


def test_non_resolving_complex_has_homology():
    # C_1 for c = 2 is phi: F -> G, which has a kernel
    cx = build_C(lin(2, 2, 4), 1)
    rep = sampled_exactness(cx, (0, 4), positions=[1], reduce=False)
    assert not rep.clean


def test_euler_characteristic_of_resolution_is_hilbert_function():
    m = lin(2, 2, 4)
    cx = build_D(m, 0)
    d = cx.differentials[0]
    for nu in range(0, 5):
        direct = cx.modules[0].offsets(nu, m.n_vars)[-1] - rank(graded_piece(d, nu))
        assert euler_characteristic(cx, nu) == direct
        # cubic scroll surface in P^4
        assert 2 * direct == 3 * nu * nu + 5 * nu + 2


def test_restrict_keeps_d_squared():
    cx = build_D(lin(3, 2, 5), 0).restrict(np.arange(1, 6))
    assert verify_d_squared(cx) and cx.n_vars == 5
