import json

import numpy as np
import pytest
from conftest import OKUMURA_INNER, OKUMURA_OUTER

from ipls import okumura
from ipls.hull import vertex_oracle
from ipls.interval import IntervalArray
from ipls.oracle import (
    VERTICES_PLUS_UNIFORM,
    NearSingularBox,
    batch_solve,
    sample_hull,
    sample_points,
    solve_error_bounds,
    vertices,
)
from ipls.system import ParametricLinearSystem


def test_point_box_gives_point(ex2):
    sys = ex2.sys.scaled(0.0)
    h = sample_hull(sys, 100, 0).hull_lower_bound
    assert np.allclose(h.lo, ex2.cd.x_mid, rtol=1e-13) and np.array_equal(h.lo, h.hi)


def test_okumura_sandwich(oku):
    h = sample_hull(oku.sys, 10_000, 1).hull_lower_bound
    for i, (olo, ohi) in enumerate(OKUMURA_OUTER):
        assert olo - 1e-5 <= h.lo[i] and h.hi[i] <= ohi + 1e-5
    # samples never reach past the exact hull, which contains the inner column
    exact = vertex_oracle(oku.sys).hull
    assert np.all(h.lo >= exact.lo - 1e-12) and np.all(h.hi <= exact.hi + 1e-12)
    assert all(exact.lo[i] <= ilo and ihi <= exact.hi[i] for i, (ilo, ihi) in enumerate(OKUMURA_INNER))
    assert h.subset(oku.outer().x_box)


def test_example2_strictly_inside_outer(ex2):
    h = sample_hull(ex2.sys, 10_000, 2).hull_lower_bound
    outer = ex2.outer().x_box
    assert np.all(h.lo > outer.lo) and np.all(h.hi < outer.hi)


def test_deterministic(ex2):
    a = sample_hull(ex2.sys, 2000, 7)
    b = sample_hull(ex2.sys, 2000, 7)
    assert a.to_json() == b.to_json()
    c = sample_hull(ex2.sys, 2000, 8)
    assert c.to_json() != a.to_json()


def test_more_samples_never_shrink(ex2):
    # prefixes of one stream: the hull can only grow
    P = sample_points(ex2.sys, 4000, 3)
    assert np.array_equal(P[:1000], sample_points(ex2.sys, 1000, 3))
    small = sample_hull(ex2.sys, 1000, 3).hull_lower_bound
    big = sample_hull(ex2.sys, 4000, 3).hull_lower_bound
    assert small.subset(big)


def test_vertices_plus_uniform_matches_vertex_hull(oku):
    h = sample_hull(oku.sys, 500, 0, VERTICES_PLUS_UNIFORM)
    assert h.sample_count == 512 + 500
    exact = vertex_oracle(oku.sys).hull
    assert np.allclose(h.hull_lower_bound.lo, exact.lo, rtol=1e-13)
    assert np.allclose(h.hull_lower_bound.hi, exact.hi, rtol=1e-13)


def test_vertices():
    sys = okumura(0.01)
    V, P = vertices(sys)
    assert V.shape == (512, 9) and len({tuple(v) for v in V}) == 512
    assert np.all((P == sys.p_box.lo) | (P == sys.p_box.hi))


def test_samples_in_box(ex2):
    P = sample_points(ex2.sys, 5000, 0)
    assert np.all(P >= ex2.sys.p_box.lo) and np.all(P <= ex2.sys.p_box.hi)


def test_near_singular_box():
    # A(p) = diag(p, 1) with p in [-1, 1] passes through singularity
    sys = ParametricLinearSystem(np.diag([0.0, 1.0]), np.ones(2), (np.diag([1.0, 0.0]),), (np.zeros(2),),
                                 IntervalArray([-1.0], [1.0]))
    X, ok = batch_solve(sys, np.array([[0.0], [0.5]]))
    assert not ok[0] and np.isnan(X[0]).all() and ok[1]
    sys = ParametricLinearSystem(np.diag([0.0, 1.0]), np.ones(2), (np.diag([1.0, 0.0]),), (np.zeros(2),),
                                 IntervalArray([0.0], [0.0]))
    with pytest.raises(NearSingularBox):
        sample_hull(sys, 100, 0)


def test_unknown_strategy(ex2):
    with pytest.raises(ValueError):
        sample_hull(ex2.sys, 10, 0, "grid")


def test_error_bounds_cover_perturbation(ex2):
    P = sample_points(ex2.sys, 200, 5)
    X, _ = batch_solve(ex2.sys, P)
    E = solve_error_bounds(ex2.sys, P, X)
    assert np.all(E > 0) and np.all(E < 1e-10)
    # a solution pushed well off by 1e-6 has a residual bound to match
    E2 = solve_error_bounds(ex2.sys, P, X + 1e-6)
    assert np.all(E2.max(axis=1) >= 1e-6)


def test_json(ex2):
    doc = json.loads(json.dumps(sample_hull(ex2.sys, 50, 0).to_json()))
    assert set(doc) == {"hull_lower_bound", "sample_count", "seed", "singular_count", "strategy"}
