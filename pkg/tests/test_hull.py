import json

import numpy as np
import pytest
from conftest import EX2_COLUMNS, EX2_ORACLE, EX2_SIGNS, OKUMURA_INNER, OKUMURA_OUTER, random_regular_systems

from ipls import analyze, example2, okumura
from ipls.hull import (
    EXACT,
    LOWER_BOUND,
    SingularVertex,
    TooManyParameters,
    Verdict,
    danger_check,
    gradient_sign_matrix,
    hull_by_signs,
    hull_report,
    oracle_table,
    sign_matrix,
    vertex_exact,
    vertex_oracle,
)
from ipls.interval import IntervalArray
from ipls.oracle import batch_solve, sample_points
from ipls.parameterized import build_pkrank1
from ipls.system import ParametricLinearSystem


def _by_columns(table, names, columns):
    idx = [names.index(c) for c in columns]
    return [[row[k] for k in idx] for row in table]


def _monotone_2x2():
    # p1 perturbs the first column, p2 only the rhs; every component is monotone in both
    u = np.array([1.0, 0.5])
    return ParametricLinearSystem(np.diag([2.0, 3.0]), np.array([1.0, 2.0]),
                                  (np.outer(u, [1.0, 0.0]), np.zeros((2, 2))), (np.zeros(2), np.array([1.0, -1.0])),
                                  IntervalArray([0.0, -0.5], [0.5, 0.5]), names=("p1", "p2"))


def test_example2_sign_matrix(ex2):
    sm = sign_matrix(ex2.cd, ex2.rep, ex2.sys.names)
    assert list(sm.columns) == EX2_COLUMNS
    assert sm.s.tolist() == EX2_SIGNS


def test_example2_oracle_table(ex2):
    orc = vertex_oracle(ex2.sys)
    assert orc.mode == EXACT and orc.vertex_count == 32
    assert _by_columns(oracle_table(orc), list(ex2.sys.names), EX2_COLUMNS) == EX2_ORACLE


def test_sign_matrix_matches_k_form(ex2):
    # matrix block equals sign(U') and the rhs-only block is -sign(U'')
    sol = build_pkrank1(ex2.cd, ex2.rep, ex2.reduced, ex2.sys.p_box, ex2.sys.names)
    sm = sign_matrix(ex2.cd, ex2.rep, ex2.sys.names)
    nd = len(ex2.rep.partition.pi_double_prime)
    assert np.array_equal(sm.s[:, nd:], np.sign(sol.U[:, nd:]))
    assert np.array_equal(sm.s[:, :nd], -np.sign(sol.U[:, :nd]))


def test_gradient_flips_matrix_block(ex2):
    a = sign_matrix(ex2.cd, ex2.rep).s
    b = gradient_sign_matrix(ex2.cd, ex2.rep).s
    nd = len(ex2.rep.partition.pi_double_prime)
    assert np.array_equal(a[:, :nd], b[:, :nd]) and np.array_equal(a[:, nd:], -b[:, nd:])


def test_rhs_block_positive_diagonal():
    sys = ParametricLinearSystem(np.diag([2.0, 5.0]), np.zeros(2), (np.zeros((2, 2)),) * 2, tuple(np.eye(2)),
                                 IntervalArray([0.0, 0.0], [1.0, 1.0]))
    an = analyze(sys)
    sm = sign_matrix(an.cd, an.rep)
    assert np.array_equal(np.diag(sm.s), [1, 1])
    assert np.array_equal(sm.s[0, 1], 0) and np.array_equal(sm.s[1, 0], 0)


def test_point_box_hull(ex2):
    an = analyze(ex2.sys.scaled(0.0))
    eh = hull_by_signs(an.sys, an.rep, sign_matrix(an.cd, an.rep), an.cd)
    for i, h in enumerate(eh.hull):
        assert h.lo == pytest.approx(an.cd.x_mid[i], abs=1e-14) and h.hi == pytest.approx(an.cd.x_mid[i], abs=1e-14)
    rep = hull_report(an)
    assert all(v is Verdict.SOUND for v in rep.verdicts)


def test_single_parameter_identity():
    # x = p on [0, 1]
    sys = ParametricLinearSystem(np.eye(1), np.zeros(1), (np.zeros((1, 1)),), (np.ones(1),),
                                 IntervalArray([0.0], [1.0]))
    orc = vertex_oracle(sys)
    assert orc.hull.lo[0] == 0 and orc.hull.hi[0] == 1
    assert orc.monotonicity_lower[0, 0] == 1 and orc.monotonicity_upper[0, 0] == 1 and orc.is_global()[0, 0]
    an = analyze(sys)
    eh = hull_by_signs(sys, an.rep, [[1]], an.cd)
    assert (eh.hull[0].lo, eh.hull[0].hi) == (0, 1)


@pytest.mark.parametrize("signs", ["oracle", "gradient"])
def test_okumura_hull_within_tables(oku, signs):
    rep = hull_report(oku, signs=signs)
    assert all(v is Verdict.SOUND for v in rep.verdicts)
    for h, (olo, ohi), (ilo, ihi) in zip(rep.endpoint.hull, OKUMURA_OUTER, OKUMURA_INNER):
        assert olo - 1e-5 <= h.lo <= ilo + 1e-5 and ihi - 1e-5 <= h.hi <= ohi + 1e-5


def test_okumura_oracle_sandwich(oku):
    orc = vertex_oracle(oku.sys)
    for i, ((olo, ohi), (ilo, ihi)) in enumerate(zip(OKUMURA_OUTER, OKUMURA_INNER)):
        assert olo - 1e-5 <= orc.hull.lo[i] <= ilo + 1e-5 and ihi - 1e-5 <= orc.hull.hi[i] <= ohi + 1e-5


def test_example2_danger(ex2):
    rep = hull_report(ex2)
    assert rep.any_mismatch
    assert all(v is Verdict.MISMATCH for v in rep.verdicts)
    inside = rep.strictly_inside(1e-6)
    assert inside
    for i in inside:
        h, o = rep.endpoint.hull[i], rep.oracle.hull[i]
        assert o.lo <= h.lo and h.hi <= o.hi


def test_example2_oracle_signs_give_exact_hull(ex2):
    rep = hull_report(ex2, signs="oracle")
    doc = rep.to_json()
    assert doc["hull"] == rep.oracle.hull.to_json()
    assert doc["source"] == "oracle"


def test_monotone_fixture_sound():
    sys = _monotone_2x2()
    assert vertex_exact(sys)
    an = analyze(sys)
    orc = vertex_oracle(sys)
    assert orc.is_global().all()
    assert danger_check(orc.monotonicity_upper, orc) == [Verdict.SOUND, Verdict.SOUND]
    rep = hull_report(an, signs="gradient")
    assert rep.verdicts == [Verdict.SOUND, Verdict.SOUND]
    for i, h in enumerate(rep.endpoint.hull):
        assert h.lo == pytest.approx(orc.hull.lo[i], abs=1e-12) and h.hi == pytest.approx(orc.hull.hi[i], abs=1e-12)


def test_zero_claim_and_ties():
    orc = vertex_oracle(_monotone_2x2())
    claim = orc.monotonicity_upper.copy()
    claim[0, 1] = 0
    assert danger_check(claim, orc)[0] is Verdict.ZERO_COEFFICIENT
    # a parameter with no effect on x1 ties at both bounds
    sys = ParametricLinearSystem(np.eye(2), np.ones(2), (np.zeros((2, 2)),) * 2,
                                 (np.array([1.0, 0.0]), np.array([0.0, 1.0])), IntervalArray([0.0, 0.0], [1.0, 1.0]))
    orc = vertex_oracle(sys)
    assert orc.tie_lower[0, 1] and orc.tie_upper[0, 1]
    for s in (-1, 1):
        assert danger_check(np.array([[1, s], [s, 1]]), orc)[0] is not Verdict.SOUND


def test_zero_radius_parameters_are_skipped():
    sys = _monotone_2x2()
    box = IntervalArray([0.25, -0.5], [0.25, 0.5])
    sys = ParametricLinearSystem(sys.A0, sys.a0, sys.A, sys.a, box, names=sys.names)
    orc = vertex_oracle(sys)
    claim = orc.monotonicity_upper.copy()
    claim[:, 0] = 0
    assert danger_check(claim, orc) == [Verdict.SOUND, Verdict.SOUND]


def test_interior_points_inside_vertex_hull(ex2):
    orc = vertex_oracle(ex2.sys)
    X, ok = batch_solve(ex2.sys, sample_points(ex2.sys, 10_000, 4))
    tol = 1e-12 * np.max(np.abs(orc.hull.mag))
    assert ok.all() and np.all(X >= orc.hull.lo - tol) and np.all(X <= orc.hull.hi + tol)


def test_sound_components_match_oracle():
    for sys in [okumura(0.01), okumura(0.25), _monotone_2x2(), *random_regular_systems(10, 31)]:
        if not vertex_exact(sys):
            continue
        rep = hull_report(analyze(sys), signs="gradient")
        assert rep.endpoint.centered_discrepancy <= 1e-12
        for i, v in enumerate(rep.verdicts):
            if v is Verdict.SOUND:
                h = rep.endpoint.hull[i]
                scale = max(1.0, abs(h.lo), abs(h.hi))
                assert abs(h.lo - rep.oracle.hull.lo[i]) <= 1e-10 * scale
                assert abs(h.hi - rep.oracle.hull.hi[i]) <= 1e-10 * scale


def test_too_many_parameters(monkeypatch, oku):
    monkeypatch.setenv("IPLS_MAX_VERTEX_K", "4")
    with pytest.raises(TooManyParameters):
        vertex_oracle(oku.sys)
    with pytest.raises(TooManyParameters):
        hull_report(oku)
    assert hull_report(oku, use_oracle=False).verdicts == [Verdict.UNCHECKED] * 5


def test_lower_bound_mode():
    # rhs outside the range of the rank-one matrix term: not vertex-exact
    u, v = np.array([1.0, 0.5]), np.array([0.3, 1.0])
    sys = ParametricLinearSystem(np.diag([3.0, 2.0]), np.ones(2), (np.outer(u, v),), (np.array([0.0, 1.0]),),
                                 IntervalArray([-0.5], [0.5]))
    assert not vertex_exact(sys)
    orc = vertex_oracle(sys, samples=500)
    assert orc.mode == LOWER_BOUND


def test_singular_vertex():
    sys = ParametricLinearSystem(np.eye(2), np.ones(2), (np.diag([1.0, 0.0]),), (np.zeros(2),),
                                 IntervalArray([-1.0], [0.0]))
    with pytest.raises(SingularVertex):
        vertex_oracle(sys)


def test_report_json_and_render(ex2):
    rep = hull_report(ex2)
    doc = json.loads(json.dumps(rep.to_json()))
    assert doc["verdicts"] == ["Mismatch"] * 3
    assert doc["claimed_columns"] == EX2_COLUMNS
    assert doc["claimed_signs"] == EX2_SIGNS
    assert doc["oracle"]["vertex_count"] == 32
    text = rep.render()
    assert "true dependence" in text and "Mismatch" in text
    header = text.splitlines()[1].split()
    assert header[:5] == EX2_COLUMNS


def test_example2_sign_matrix_regression():
    # independent recomputation of the sign matrix from scratch
    sys = example2()
    A, a = sys.evaluate_at(sys.p_mid)
    C = np.linalg.inv(A)
    x = C @ a
    an = analyze(sys)
    L, R, F, t = an.rep.L, an.rep.R, an.rep.F, an.rep.t
    W = np.hstack([C @ F, (C @ L) * (R @ x - t)])
    assert np.array_equal(np.sign(W).astype(int), sign_matrix(an.cd, an.rep).s)
