from __future__ import annotations

from math import comb

import numpy as np
import pytest

from detrep.model import (DegreeMatrix, betti, curve_genus, degree, genus, hypothesis_check, invariants,
                          maximal_minors, new_model)


def test_degree_matrix_defaults_and_validation():
    dm = DegreeMatrix(3, 2)
    assert dm.is_linear and dm.b == (0, 0, 0) and dm.a == (1, 1, 1, 1)
    assert dm.ell == 4 and dm.mu == 2
    with pytest.raises(ValueError):
        DegreeMatrix(2, 2, [0, 1], [1, 1, 1])
    with pytest.raises(ValueError):
        DegreeMatrix(2, 2, [0, 0], [1, 1])
    assert DegreeMatrix(1, 3).ell == 3


def test_mu_values():
    dm = DegreeMatrix(2, 2, [1, 0], [3, 2, 2])
    # t + 1 - a_3 + b_1 + b_1
    assert dm.mu == 3 - 2 + 1 + 1
    assert dm.mu1 == 2 - 2 + 2 + 0
    assert DegreeMatrix(3, 2).mu1 == 3 - 2


def test_new_model_deterministic():
    dm = DegreeMatrix.linear(2, 2)
    a, b = new_model(dm, 4, seed=5), new_model(dm, 4, seed=5)
    assert a.phi == b.phi
    assert new_model(dm, 4, seed=6).phi != a.phi
    with pytest.raises(ValueError):
        new_model(dm, 1)


def test_negative_degree_slots_are_zero():
    dm = DegreeMatrix(2, 1, [2, 0], [1, 1])
    m = new_model(dm, 3)
    assert m.entry(0, 0).is_zero() and m.entry(0, 1).is_zero()
    assert not m.entry(1, 0).is_zero()


def test_minors_match_direct_determinant():
    m = new_model(DegreeMatrix.linear(2, 2), 4, seed=3)
    mins = maximal_minors(m)
    assert len(mins) == comb(3, 2)
    f = m.entry(0, 0) * m.entry(1, 1) - m.entry(0, 1) * m.entry(1, 0)
    assert mins[0] == f and f.degree == 2


def test_minors_vanish_at_a_rank_deficient_point():
    # a 3x3 determinant with a repeated column is zero
    m = new_model(DegreeMatrix.linear(3, 1), 3, seed=2)
    from detrep.model import _laplace
    assert _laplace(m, (0, 1, 2), (0, 0, 1), {}).is_zero()


def test_restrict_drops_a_variable():
    m = new_model(DegreeMatrix.linear(2, 2), 4)
    r = m.restrict(np.arange(4))
    assert r.n == 3 and r.n_vars == 4 and r.entry(0, 0).n_vars == 4


def test_degree_betti_genus():
    assert degree(2, 2) == 3 and degree(3, 2) == 6
    assert betti(2, 2) == [3, 2]
    assert curve_genus(3, 3) == 3
    m = new_model(DegreeMatrix.linear(3, 2), 3)
    assert genus(m) == 3 and invariants(m)["degree"] == 6
    with pytest.raises(ValueError):
        genus(new_model(DegreeMatrix.linear(3, 2), 4))


def test_betti_alternating_sum():
    # the resolution of A has Euler characteristic zero in rank terms
    for t in range(1, 6):
        for c in range(1, 6):
            assert 1 + sum((-1) ** (i + 1) * r for i, r in enumerate(betti(t, c))) == 0


def test_hypothesis_check_linear():
    rep = hypothesis_check(DegreeMatrix.linear(3, 2), 5)
    assert rep.main_inequality and rep.dim_ok
    assert rep.verdict in ("wildness theorem applies", "t=3 boundary case")
    assert hypothesis_check(DegreeMatrix.linear(3, 2), 3).verdict == "no theorem applies"
    t2 = hypothesis_check(DegreeMatrix.linear(2, 2), 4)
    assert t2.t2_boundary and t2.alpha == 3
