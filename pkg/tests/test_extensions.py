from __future__ import annotations

import json
from math import comb

import numpy as np
import pytest

from detrep.exactalg import GradedFreeModule, HomogMatrix, compose, random_form, rank
from detrep.extengine import ext_L2_L1, ext_M_Mdual, linear_model
from detrep.extensions import (HomSpace, ModulePresentation, a_module_classes, a_module_subspace, assemble,
                               build_extension, cocycle_space, extension_of_rank, nonminimal, presentation_of,
                               section3_pair, ulrich_check, ulrich_pair)
from detrep.model import degree

P = 32003


@pytest.fixture(scope="module")
def scroll():
    m = linear_model(2, 2, 4)
    sub, quot = ulrich_pair(m)
    return m, sub, quot, cocycle_space(quot, sub)


def test_presentation_of_M_is_phi():
    m = linear_model(2, 2, 4)
    pres = presentation_of(m, "M")
    assert pres.gens == m.G and pres.rels == m.phi
    assert pres.minimal


def test_presentation_shapes(scroll):
    m, sub, quot, _ = scroll
    assert quot.gens.twists == (0, 0, 0) and quot.rels.source.twists == (1,) * 6
    assert sub.gens.twists == (0, 0, 0) and sub.num_generators() == 3 == degree(2, 2)
    with pytest.raises(ValueError):
        presentation_of(m, "S")
    with pytest.raises(ValueError):
        presentation_of(m, "N")


def test_homspace_roundtrip():
    rng = np.random.default_rng(0)
    X, Y = GradedFreeModule([1, 2]), GradedFreeModule([0, 1])
    ent = {(i, j): random_form(3, u - v, rng, P) for i, v in enumerate(Y.twists)
           for j, u in enumerate(X.twists) if u >= v}
    f = HomogMatrix(X, Y, ent, n_vars=3, p=P)
    H = HomSpace(X, Y, 3, P)
    assert H.from_vec(H.to_vec(f)) == f


def test_homspace_compose_matrices_match_compose():
    rng = np.random.default_rng(1)

    def rand(src, tgt):
        ent = {(i, j): random_form(3, u - v, rng, P) for i, v in enumerate(tgt.twists)
               for j, u in enumerate(src.twists) if u >= v}
        return HomogMatrix(src, tgt, ent, n_vars=3, p=P)

    X, Y, Z, W = (GradedFreeModule(t) for t in ([2, 3], [1, 2], [0, 1], [0]))
    xi, d, a = rand(Y, Z), rand(X, Y), rand(Z, W)
    H = HomSpace(Y, Z, 3, P)
    R, out = H.right_compose(d)
    assert out.from_vec(R @ H.to_vec(xi) % P) == compose(xi, d)
    L, out2 = H.left_compose(a)
    assert out2.from_vec(L @ H.to_vec(xi) % P) == compose(a, xi)


def test_free_module_has_no_extensions():
    R = GradedFreeModule([0])
    free = ModulePresentation(R, HomogMatrix(GradedFreeModule([]), R, {}, n_vars=3, p=P), None, "R")
    assert cocycle_space(free, free).dim == 0


def test_cocycle_space_contains_sheaf_classes(scroll):
    m, sub, quot, space = scroll
    assert space.dim >= ext_L2_L1(m, 1, 0) == 1
    lifts = space.lifts()
    assert all(space.is_cocycle(x) for x in lifts)
    assert space.class_rank(lifts) == space.dim


def test_a_module_subspace_matches_sheaf_dimension(scroll):
    m, sub, quot, space = scroll
    assert a_module_subspace(space, m).shape[1] == ext_L2_L1(m, 1, 0)


def test_rank_two_extension(scroll):
    m, sub, quot, space = scroll
    cls = a_module_classes(space, m)
    ext = build_extension(sub, [quot], cls[:1], m, space)
    assert ext.is_A_module and not ext.split and ext.rank == 2
    rep = ulrich_check(ext, m, (0, 7))
    assert rep["mu"] == 6 == 2 * degree(2, 2)
    assert rep["additivity_ok"] and rep["verdict"] == "numerically consistent"
    E = ext.assembled
    assert E.gens.rank == 6 and E.rels.source.rank == 12


def test_non_a_module_class_detected(scroll):
    m, sub, quot, space = scroll
    A = a_module_subspace(space, m)
    # a representative outside the A-module subspace
    for q in range(space.dim):
        e = np.zeros(space.dim, dtype=np.int64)
        e[q] = 1
        stacked = np.column_stack([A, e])
        if rank(stacked, P) > A.shape[1]:
            break
    lift = space.hom.from_vec(space.reps @ e % P)
    ext = build_extension(sub, [quot], [lift], m, space)
    assert ext.is_A_module is False
    assert ulrich_check(ext, m)["additivity_ok"]


def test_rank_three_refused(scroll):
    m = scroll[0]
    with pytest.raises(ValueError, match="only 1 available"):
        extension_of_rank(m, 3)


def test_dependent_cocycles_refused(scroll):
    m, sub, quot, space = scroll
    x = space.lifts()[0]
    with pytest.raises(ValueError, match="span"):
        build_extension(sub, [quot, quot], [x, x], m, space)


def test_split_extension(scroll):
    m, sub, quot, space = scroll
    zero = space.hom.from_vec(np.zeros(space.hom.dim, dtype=np.int64))
    ext = build_extension(sub, [quot], [zero], m, space)
    assert ext.split and ext.is_A_module
    for nu in range(0, 5):
        assert ext.assembled.hilbert(nu) == sub.hilbert(nu) + quot.hilbert(nu)


def test_r_level_classes_iterate(scroll):
    # R-level classes allow higher rank; generator count stays rank * deg
    m, sub, quot, space = scroll
    lifts = space.lifts()[:2]
    ext = build_extension(sub, [quot, quot], lifts, m, space)
    rep = ulrich_check(ext, m, (0, 5))
    assert rep["mu"] == 9 and rep["additivity_ok"]


def test_nonminimal_control(scroll):
    m, sub, quot, space = scroll
    cls = a_module_classes(space, m)
    ctrl = build_extension(nonminimal(sub), [quot], cls[:1], m, check=False)
    rep = ulrich_check(ctrl, m, (0, 7))
    assert rep["mu"] == 5 and rep["verdict"] == "fails"


def test_section3_pair_dimensions():
    m = linear_model(3, 2, 5)
    sub, quot = section3_pair(m)
    assert sub.gens.twists == (1,) * 6
    space = cocycle_space(quot, sub)
    sheaf = ext_M_Mdual(m, 1, 1, 1)
    assert sheaf == comb(4, 3)
    assert space.dim >= sheaf
    assert a_module_subspace(space, m).shape[1] == sheaf


def test_json_export(scroll):
    m = scroll[0]
    ext = extension_of_rank(m, 2)
    blob = json.loads(json.dumps(ext.as_dict()))
    assert blob["gens"] == [0] * 6 and blob["rank"] == 2
    assert all(len(term) == 2 for ent in blob["rels"] for term in ent["terms"])


def test_assemble_shape_check(scroll):
    m, sub, quot, space = scroll
    bad = HomogMatrix(quot.rels.source, GradedFreeModule([1, 1]), {}, n_vars=sub.n_vars, p=P)
    with pytest.raises(ValueError):
        assemble(sub, [quot], [bad])
    with pytest.raises(ValueError):
        assemble(sub, [quot, quot], space.lifts()[:1])
