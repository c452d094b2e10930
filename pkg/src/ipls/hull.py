"""Interval hull from monotonicity signs, and checks on when that is safe.

If component ``x_i`` of the solution set is monotone in every parameter with
direction vector ``s`` (1 increasing, -1 decreasing), its hull is
``[x_i(p^{-s}), x_i(p^{s})]`` where ``p^{s} = p_mid + s * p_rad``.  Reading
``s`` off the coefficient signs of a parameterized solution is tempting but
unsound in general; ``vertex_oracle`` computes the true attaining endpoints
for systems whose parameter matrices all have rank at most one, and
``danger_check`` compares the two.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .enclosure import Analysis, CentralData
from .interval import Interval, IntervalArray
from .oracle import batch_solve, sample_points, solve_error_bounds, vertices
from .parameterized import column_names
from .rankone import RankOneRepresentation
from .system import ParametricLinearSystem

SIGN_ZERO_RTOL = 1e-12
TIE_RTOL = 1e-10
DEFAULT_MAX_K = 20

EXACT = "exact"
LOWER_BOUND = "lower-bound"


class Verdict(str, enum.Enum):
    SOUND = "Sound"
    ZERO_COEFFICIENT = "ZeroCoefficient"
    MISMATCH = "Mismatch"
    UNCHECKED = "Unchecked"  # no oracle was run


class TooManyParameters(ValueError):
    pass


class SingularVertex(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class SignMatrix:
    s: np.ndarray  # n x (|pi''| + gamma), entries in {-1, 0, 1}
    columns: tuple
    rep: RankOneRepresentation

    def per_parameter(self, K: int) -> np.ndarray:
        """Collapse to an n x K matrix in original parameter order.

        A parameter whose gamma-columns disagree gets 0.
        """
        part = self.rep.partition
        out = np.zeros((self.s.shape[0], K), dtype=int)
        nd = len(part.pi_double_prime)
        for j, k in enumerate(part.pi_double_prime):
            out[:, k] = self.s[:, j]
        for pos, k in enumerate(part.pi_prime):
            block = self.s[:, nd + np.flatnonzero(self.rep.block_index == pos)]
            agree = np.all(block == block[:, :1], axis=1)
            out[:, k] = np.where(agree, block[:, 0], 0)
        return out


def _signs(W: np.ndarray) -> np.ndarray:
    row_scale = np.max(np.abs(W), axis=1, initial=0.0, keepdims=True)
    s = np.sign(W).astype(int)
    s[np.abs(W) < SIGN_ZERO_RTOL * row_scale] = 0
    return s


def sign_matrix(cd: CentralData, rep: RankOneRepresentation, names=None) -> SignMatrix:
    """sign(CF, CL D_{y_mid - t}).

    Note the rhs-only block enters with ``+CF`` here, the opposite sign of the
    K-form coefficient matrix ``U``.
    """
    W = np.hstack([cd.C @ rep.F, (cd.C @ rep.L) * (cd.y_mid - rep.t)])
    names = names or [f"p{k + 1}" for k in range(len(cd.p_mid))]
    return SignMatrix(_signs(W), tuple(column_names(rep, names)), rep)


def gradient_sign_matrix(cd: CentralData, rep: RankOneRepresentation, names=None) -> SignMatrix:
    """Signs of the partial derivatives ``dx/dp`` at the midpoint, i.e. sign(CF, -CL D_{y_mid - t})."""
    W = np.hstack([cd.C @ rep.F, -(cd.C @ rep.L) * (cd.y_mid - rep.t)])
    names = names or [f"p{k + 1}" for k in range(len(cd.p_mid))]
    return SignMatrix(_signs(W), tuple(column_names(rep, names)), rep)


@dataclass(frozen=True)
class EndpointHull:
    hull: list  # Interval or None per component
    lower_values: np.ndarray
    upper_values: np.ndarray
    crossed: np.ndarray  # lower-endpoint value above upper-endpoint value
    centered_discrepancy: float
    r_star: list  # Interval-like (lo, hi) tuples, diagnostic only
    errors: dict = field(default_factory=dict)


def _centered_solve(sys, rep, A_mid, a_mid, dev):
    """Solve the centered system at deviation ``dev = p_mid - p``."""
    g = rep.g(dev)
    A = A_mid - (rep.L * g) @ rep.R
    a = a_mid - rep.F @ rep.p_dprime(dev) - rep.L @ (g * rep.t)
    return linalg.solve(A, a)


def hull_by_signs(sys: ParametricLinearSystem, rep: RankOneRepresentation, signs,
                  cd: CentralData | None = None) -> EndpointHull:
    """Per component i solve at ``p^{-s_i}`` (lower) and ``p^{s_i}`` (upper).

    ``signs`` is a SignMatrix or an n x K integer array.  Both the direct and
    the centered endpoint systems are solved; their largest relative
    disagreement is reported.
    """
    S = signs.per_parameter(sys.K) if isinstance(signs, SignMatrix) else np.asarray(signs, dtype=int)
    p_mid, p_rad = sys.p_mid, sys.p_rad
    A_mid, a_mid = sys.evaluate_at(p_mid)
    x_mid = cd.x_mid if cd is not None else linalg.solve(A_mid, a_mid)
    y_mid = rep.R @ x_mid
    C = cd.C if cd is not None else linalg.invert(A_mid)
    CL = C @ rep.L
    n = sys.n
    lower = np.full(n, np.nan)
    upper = np.full(n, np.nan)
    hull, r_star, errors = [], [], {}
    worst = 0.0
    for i in range(n):
        s = S[i]
        vals, rs = [], []
        for sign in (-1, 1):
            p = p_mid + sign * s * p_rad
            try:
                x = linalg.solve(*sys.evaluate_at(p))
                xc = _centered_solve(sys, rep, A_mid, a_mid, p_mid - p)
            except linalg.Singular as exc:
                errors[i] = f"singular endpoint system at p^{'+' if sign > 0 else '-'}s: {exc}"
                break
            scale = max(1.0, np.max(np.abs(x)))
            worst = max(worst, float(np.max(np.abs(x - xc)) / scale))
            vals.append(x[i])
            rs.append(float(CL[i] @ (rep.g(p_mid - p) * (rep.R @ x - y_mid))))
        if len(vals) < 2:
            hull.append(None)
            r_star.append(None)
            continue
        lower[i], upper[i] = vals
        hull.append(Interval(min(vals), max(vals)))
        r_star.append(tuple(rs))
    return EndpointHull(hull, lower, upper, lower > upper, worst, r_star, errors)


@dataclass(frozen=True)
class VertexOracle:
    """Exact hull (rank-one case) and the endpoint signs attaining each bound.

    ``signs_lower[i, k]`` is the endpoint (-1 lower, +1 upper end of the
    parameter interval) at which ``x_i`` reaches its minimum, ``signs_upper``
    likewise for the maximum; 0 with ``tie_*`` set when the attaining
    vertices disagree in that parameter.  The monotonicity direction implied
    at each bound is ``-signs_lower`` and ``signs_upper``.
    """

    hull: IntervalArray
    signs_lower: np.ndarray
    signs_upper: np.ndarray
    tie_lower: np.ndarray
    tie_upper: np.ndarray
    mode: str
    vertex_count: int
    errors: np.ndarray | None = None  # bound on each hull endpoint's floating-point solve error
    active: np.ndarray | None = None  # parameters with nonzero radius

    @property
    def monotonicity_lower(self) -> np.ndarray:
        return -self.signs_lower

    @property
    def monotonicity_upper(self) -> np.ndarray:
        return self.signs_upper

    def is_global(self) -> np.ndarray:
        return (self.monotonicity_lower == self.monotonicity_upper) & (self.signs_upper != 0)


def max_vertex_k() -> int:
    return int(os.environ.get("IPLS_MAX_VERTEX_K", DEFAULT_MAX_K))


def _attaining(values, target, V, tol):
    hit = np.abs(values - target) <= tol
    pats = V[hit]
    agree = np.all(pats == pats[:1], axis=0)
    return np.where(agree, pats[0], 0).astype(int), ~agree


def vertex_exact(sys: ParametricLinearSystem) -> bool:
    """Whether the vertex hull is the exact hull (see ``vertex_oracle``)."""
    return all(np.linalg.matrix_rank(np.column_stack([M, v])) <= 1 for M, v in zip(sys.A, sys.a))


def vertex_oracle(sys: ParametricLinearSystem, max_K: int | None = None, samples: int = 10_000,
                  seed: int = 0) -> VertexOracle:
    """Solve at all ``2^K`` box vertices.

    Exact when every stacked coefficient ``[A_k | a_k]`` has rank at most
    one: then each solution component is a linear-fractional, hence
    monotone, function of each single parameter and the hull is attained at
    vertices.  A rank-one ``A_k = u v^T`` with ``a_k`` outside ``span(u)``
    makes the dependence quadratic over linear and can put an extremum
    inside the box.  In that case uniform samples are added and the result
    is labelled as a lower bound on the hull.
    """
    if max_K is None:
        max_K = max_vertex_k()
    if sys.K > max_K:
        raise TooManyParameters(f"K={sys.K} exceeds the vertex-oracle cap {max_K}")
    rank_one = vertex_exact(sys)
    V, P = vertices(sys)
    X, ok = batch_solve(sys, P)
    if not ok.all():
        raise SingularVertex(f"{int((~ok).sum())} singular vertex matrices")
    mode = EXACT
    if not rank_one:
        mode = LOWER_BOUND
        Xs, oks = batch_solve(sys, sample_points(sys, samples, seed))
        Xs = Xs[oks]
    n = sys.n
    lo, hi = X.min(axis=0), X.max(axis=0)
    if mode == LOWER_BOUND and len(Xs):
        lo, hi = np.minimum(lo, Xs.min(axis=0)), np.maximum(hi, Xs.max(axis=0))
    sl = np.zeros((n, sys.K), dtype=int)
    su = np.zeros((n, sys.K), dtype=int)
    tl = np.zeros((n, sys.K), dtype=bool)
    tu = np.zeros((n, sys.K), dtype=bool)
    for i in range(n):
        tol = TIE_RTOL * max(1.0, abs(lo[i]), abs(hi[i]))
        sl[i], tl[i] = _attaining(X[:, i], X[:, i].min(), V, tol)
        su[i], tu[i] = _attaining(X[:, i], X[:, i].max(), V, tol)
    err = solve_error_bounds(sys, P, X).max(axis=0)
    return VertexOracle(IntervalArray(lo, hi), sl, su, tl, tu, mode, len(V), err, sys.p_rad > 0)


def danger_check(claimed: np.ndarray, oracle: VertexOracle) -> list[Verdict]:
    """Classify each component's claimed sign vector against the oracle.

    Sound needs every claimed sign nonzero, no ties, and the claim to point at
    exactly the attaining endpoints: lower bound at ``p^{-s}``, upper at
    ``p^{s}``.  Anything else means the sign-based box is not certified.
    Parameters with zero radius cannot move the hull and are skipped.
    """
    claimed = np.asarray(claimed, dtype=int)
    act = oracle.active if oracle.active is not None else np.ones(claimed.shape[1], dtype=bool)
    out = []
    for i in range(claimed.shape[0]):
        s = claimed[i, act]
        if np.any(s == 0):
            out.append(Verdict.ZERO_COEFFICIENT)
        elif (not oracle.tie_lower[i, act].any() and not oracle.tie_upper[i, act].any()
              and np.array_equal(oracle.monotonicity_lower[i, act], s)
              and np.array_equal(oracle.monotonicity_upper[i, act], s)):
            out.append(Verdict.SOUND)
        else:
            out.append(Verdict.MISMATCH)
    return out


@dataclass(frozen=True)
class HullReport:
    names: tuple
    claimed_signs: np.ndarray  # n x K
    claimed_columns: tuple
    claimed_matrix: np.ndarray  # n x (|pi''| + gamma), as derived
    endpoint: EndpointHull
    oracle: VertexOracle | None
    verdicts: list
    source: str = "from-param"

    @property
    def any_mismatch(self) -> bool:
        return any(v is not Verdict.SOUND for v in self.verdicts)

    def strictly_inside(self, margin: float = 1e-6) -> list[int]:
        """Components whose sign-based box lies inside the oracle hull by more than ``margin``."""
        if self.oracle is None:
            return []
        out = []
        for i, h in enumerate(self.endpoint.hull):
            if h is None:
                continue
            o_lo, o_hi = self.oracle.hull.lo[i], self.oracle.hull.hi[i]
            if h.lo >= o_lo and h.hi <= o_hi and (h.lo - o_lo > margin or o_hi - h.hi > margin):
                out.append(i)
        return out

    def to_json(self) -> dict:
        out = {
            "parameters": list(self.names),
            "claimed_columns": list(self.claimed_columns),
            "claimed_signs": self.claimed_matrix.tolist(),
            "claimed_signs_by_parameter": self.claimed_signs.tolist(),
            "hull_by_signs": [h.to_json() if h is not None else None for h in self.endpoint.hull],
            "crossed": self.endpoint.crossed.tolist(),
            "centered_discrepancy": self.endpoint.centered_discrepancy,
            "r_star": [list(r) if r is not None else None for r in self.endpoint.r_star],
            "verdicts": [v.value for v in self.verdicts],
            "source": self.source,
        }
        # the box this report stands behind: the oracle hull when signs come from it
        if self.source == "oracle" and self.oracle is not None:
            out["hull"] = self.oracle.hull.to_json()
        else:
            out["hull"] = out["hull_by_signs"]
        if self.endpoint.errors:
            out["errors"] = {str(k): v for k, v in self.endpoint.errors.items()}
        if self.oracle is not None:
            out["oracle"] = {
                "mode": self.oracle.mode,
                "vertex_count": self.oracle.vertex_count,
                "hull": self.oracle.hull.to_json(),
                "signs_lower": self.oracle.signs_lower.tolist(),
                "signs_upper": self.oracle.signs_upper.tolist(),
                "tie_lower": self.oracle.tie_lower.tolist(),
                "tie_upper": self.oracle.tie_upper.tolist(),
                "table": oracle_table(self.oracle),
            }
        return out

    def render(self) -> str:
        return render_sign_tables(self)


def oracle_table(oracle: VertexOracle) -> list[list[str]]:
    """Cells ``"a"`` when both bounds are attained at the same endpoint sign, else ``"a, b"``."""
    rows = []
    for i in range(oracle.signs_lower.shape[0]):
        row = []
        for k in range(oracle.signs_lower.shape[1]):
            lo, hi = oracle.signs_lower[i, k], oracle.signs_upper[i, k]
            cell = f"{lo}" if lo == hi else f"{lo}, {hi}"
            if oracle.tie_lower[i, k] or oracle.tie_upper[i, k]:
                cell += "*"
            row.append(cell)
        rows.append(row)
    return rows


def _param_order(report: HullReport) -> list[int]:
    names = list(report.names)
    seen, order = set(), []
    for c in report.claimed_columns:
        base = c.split("[")[0]
        k = names.index(base)
        if k not in seen:
            seen.add(k)
            order.append(k)
    for k in range(len(names)):
        if k not in seen:
            order.append(k)
    return order


def render_sign_tables(report: HullReport) -> str:
    order = _param_order(report)
    head = [report.names[k] for k in order]
    width = max(8, *(len(h) + 2 for h in head))
    label = {"from-param": "claimed sign(CF, CL D)", "gradient": "claimed sign(dx/dp at midpoint)",
             "oracle": "claimed (oracle upper-bound direction)"}[report.source]
    right_label = "true dependence (oracle)"
    if report.oracle is not None and report.oracle.mode != EXACT:
        right_label = f"attaining endpoints (oracle, {report.oracle.mode})"
    lines = [label.ljust(12 + width * len(head)) + "   " + right_label]
    left_head = "".ljust(6) + "".join(h.rjust(width) for h in head)
    lines.append(left_head + "   " + left_head)
    table = oracle_table(report.oracle) if report.oracle is not None else None
    for i in range(report.claimed_signs.shape[0]):
        left = f"x{i + 1}".ljust(6) + "".join(str(report.claimed_signs[i, k]).rjust(width) for k in order)
        right = ""
        if table is not None:
            right = f"x{i + 1}".ljust(6) + "".join(table[i][k].rjust(width) for k in order)
        lines.append(left + "   " + right)
    lines.append("")
    for i, v in enumerate(report.verdicts):
        h = report.endpoint.hull[i]
        o = f"  oracle {report.oracle.hull[i]!r}" if report.oracle is not None else ""
        lines.append(f"x{i + 1}: {v.value:<16} by-signs {h!r}{o}")
    return "\n".join(lines)


def hull_report(an: Analysis, signs: str = "from-param", use_oracle: bool = True,
                max_K: int | None = None) -> HullReport:
    """Run the sign-based hull for ``signs`` in {"from-param", "gradient", "oracle"}.

    ``oracle`` takes the claimed directions from the vertex oracle itself
    (using the upper-bound direction where the two bounds disagree).
    """
    sys, rep, cd = an.sys, an.rep, an.cd
    oracle = vertex_oracle(sys, max_K) if use_oracle or signs == "oracle" else None
    if signs == "from-param":
        sm = sign_matrix(cd, rep, sys.names)
        claimed, cols, mat = sm.per_parameter(sys.K), sm.columns, sm.s
    elif signs == "gradient":
        sm = gradient_sign_matrix(cd, rep, sys.names)
        claimed, cols, mat = sm.per_parameter(sys.K), sm.columns, sm.s
    elif signs == "oracle":
        claimed = oracle.monotonicity_upper.copy()
        cols, mat = tuple(sys.names), claimed
    else:
        raise ValueError(f"unknown sign source {signs!r}")
    endpoint = hull_by_signs(sys, rep, claimed, cd)
    verdicts = danger_check(claimed, oracle) if oracle is not None else [Verdict.UNCHECKED] * sys.n
    return HullReport(tuple(sys.names), claimed, tuple(cols), np.asarray(mat), endpoint, oracle, verdicts, signs)
