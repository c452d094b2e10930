"""Parameterized solutions: affine functions of the parameter deviations.

Two forms are built from the same reduced-system enclosure ``y``:

* the P-form  ``x(p) = x_mid - CF (p_mid'' - p'') + (CL D_{|y - t|}) g(p_mid' - p')``
* the K-form  ``x(p, r) = x_mid + U q + r``  with ``U = (-CF, CL D_{y_mid - t})``,
  ``q = (p_mid'' - p'', g(p_mid' - p'))`` and ``|r| <= r_hat``.

Both evaluate to the same box as the outer enclosure; the K-form also yields
an inner estimate of the interval hull.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .enclosure import CentralData, NotStronglyRegular, ReducedSolution, check_strong_regularity
from .interval import EMPTY, Interval, IntervalArray, real_dot_bounds, real_iv_matvec, round_down, round_up
from .rankone import RankOneRepresentation


def _y(y_box) -> IntervalArray:
    return y_box.y_box if isinstance(y_box, ReducedSolution) else y_box


def column_names(rep: RankOneRepresentation, names) -> list[str]:
    cols = [names[k] for k in rep.partition.pi_double_prime]
    for pos, k in enumerate(rep.partition.pi_prime):
        m = rep.gamma_k[pos]
        cols.extend([names[k]] if m == 1 else [f"{names[k]}[{j}]" for j in range(m)])
    return cols


def deviation(rep: RankOneRepresentation, p_mid, p):
    """``q = (p_mid'' - p'', g(p_mid' - p'))`` for real or interval ``p``."""
    d = p_mid - p if not isinstance(p, IntervalArray) else IntervalArray.point(p_mid) - p
    if isinstance(d, IntervalArray):
        dd = list(rep.partition.pi_double_prime)
        lo = np.concatenate([d.lo[dd], rep.g(d.lo)])
        hi = np.concatenate([d.hi[dd], rep.g(d.hi)])
        return IntervalArray(lo, hi, check=False)
    d = np.asarray(d, dtype=float)
    return np.concatenate([rep.p_dprime(d), rep.g(d)])


@dataclass(frozen=True)
class ParameterizedSolutionP:
    x_mid: np.ndarray
    W_dp: np.ndarray  # CF
    W_g: np.ndarray  # CL D_{|y - t|}
    rep: RankOneRepresentation
    p_mid: np.ndarray

    @property
    def U(self) -> np.ndarray:
        return np.hstack([-self.W_dp, self.W_g])


@dataclass(frozen=True)
class ParameterizedSolutionK:
    x_mid: np.ndarray
    U: np.ndarray
    r_hat: np.ndarray
    rep: RankOneRepresentation
    p_mid: np.ndarray
    columns: tuple = ()

    def to_json(self) -> dict:
        return {
            "x_mid": self.x_mid.tolist(),
            "U": self.U.tolist(),
            "r_hat": self.r_hat.tolist(),
            "column_order": list(self.columns),
        }


def _require_regular(cd):
    if not check_strong_regularity(cd):
        raise NotStronglyRegular(f"spectral radius {cd.rho_strong:.6g} >= 1")


def build_pprank1(cd: CentralData, rep: RankOneRepresentation, y_box, p_box=None) -> ParameterizedSolutionP:
    _require_regular(cd)
    Y = _y(y_box)
    CL = cd.C @ rep.L
    return ParameterizedSolutionP(
        x_mid=cd.x_mid,
        W_dp=cd.C @ rep.F,
        W_g=CL * (Y - rep.t).mag,
        rep=rep,
        p_mid=cd.p_mid if p_box is None else p_box.mid,
    )


def build_pkrank1(cd: CentralData, rep: RankOneRepresentation, y_box, p_box=None, names=None) -> ParameterizedSolutionK:
    _require_regular(cd)
    Y = _y(y_box)
    p_rad = cd.p_rad if p_box is None else p_box.rad
    CL = cd.C @ rep.L
    U = np.hstack([-(cd.C @ rep.F), CL * (cd.y_mid - rep.t)])
    # r_hat = |CL| D_{|y - y_mid|} g(p_rad'), rounded up so it stays an upper bound
    spread = (Y - cd.y_mid).mag
    _, r_hat = real_dot_bounds(np.abs(CL), round_up(spread * rep.g(p_rad)))
    if names is None:
        names = [f"p{k + 1}" for k in range(len(cd.p_mid))]
    return ParameterizedSolutionK(
        x_mid=cd.x_mid,
        U=U,
        r_hat=np.maximum(r_hat, 0.0),
        rep=rep,
        p_mid=cd.p_mid if p_box is None else p_box.mid,
        columns=tuple(column_names(rep, names)),
    )


def evaluate_param(solution, p, include_remainder: bool = True) -> IntervalArray:
    """Evaluate a parameterized solution at a point or over a box of parameters."""
    q = deviation(solution.rep, solution.p_mid, p)
    U = solution.U
    if not isinstance(q, IntervalArray):
        q = IntervalArray.point(q)
    if q.shape != (U.shape[1],):
        raise ValueError(f"expected {U.shape[1]} deviation components, got {q.shape}")
    x = IntervalArray.point(solution.x_mid) + real_iv_matvec(U, q)
    if include_remainder and isinstance(solution, ParameterizedSolutionK):
        x = x + IntervalArray.symmetric(solution.r_hat)
    return x


def q_radius(solution, p_box: IntervalArray) -> np.ndarray:
    rep = solution.rep
    return np.concatenate([rep.p_dprime(p_box.rad), rep.g(p_box.rad)])


@dataclass(frozen=True)
class InnerEstimate:
    x_in: tuple  # Interval or EMPTY per component
    v_low: IntervalArray
    v_up: IntervalArray

    def to_json(self) -> dict:
        return {
            "x_in": [c.to_json() for c in self.x_in],
            "v_low": self.v_low.to_json(),
            "v_up": self.v_up.to_json(),
        }

    @property
    def empty_components(self) -> list[int]:
        return [i for i, c in enumerate(self.x_in) if c is EMPTY]


def inner_estimate(solution: ParameterizedSolutionK, p_box: IntervalArray) -> InnerEstimate:
    """Inner estimate ``x_mid + U q + dual([-r_hat, r_hat])`` over the centered ``q`` box.

    Componentwise this is ``[(x_mid + Uq)^- + r_hat, (x_mid + Uq)^+ - r_hat]``;
    components whose endpoints cross are empty.
    """
    q_hat = q_radius(solution, p_box)
    # spread = |U| q_hat; the inner box needs a lower bound, the outer parts an upper one
    s_lo, s_hi = real_dot_bounds(np.abs(solution.U), q_hat)
    x = solution.x_mid
    r = solution.r_hat
    in_lo = round_up(round_up(x - s_lo) + r)
    in_hi = round_down(round_down(x + s_lo) - r)
    comps = tuple(Interval(l, h) if l <= h else EMPTY for l, h in zip(in_lo, in_hi))
    z_lo, z_hi = round_down(x - s_hi), round_up(x + s_hi)
    v_low = IntervalArray(round_down(z_lo - r), round_up(z_lo + r), check=False)
    v_up = IntervalArray(round_down(z_hi - r), round_up(z_hi + r), check=False)
    return InnerEstimate(comps, v_low, v_up)
