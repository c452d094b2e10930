"""Outer enclosure of the united solution set via the reduced system in ``y = R x``.

With ``C = A(p_mid)^{-1}`` and ``x_mid = C a(p_mid)`` every solution satisfies

    x = x_mid - C F (p_mid'' - p'') + C L D_{g(p_mid' - p')} (y - t),   y = R x,

so an enclosure of the reduced system's solution set gives one for ``x``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import linalg
from .interval import IntervalArray, real_iv_matvec
from .rankone import RankOneRepresentation, build_representation
from .system import ParametricLinearSystem

log = logging.getLogger(__name__)

IGRANK1 = "iGRank1"
IGNP = "iGNP-form"

MAX_ITER = 1000
CONV_TOL = 1e-14
INFLATE_REL = 1e-12
INFLATE_ABS = 1e-300


class NotStronglyRegular(ValueError):
    pass


class NoConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class CentralData:
    C: np.ndarray
    x_mid: np.ndarray
    y_mid: np.ndarray
    rho_strong: float
    rho_weak: float
    p_mid: np.ndarray
    p_rad: np.ndarray
    a0: np.ndarray

    @property
    def strongly_regular(self) -> bool:
        return self.rho_strong < 1.0

    @property
    def weakly_regular(self) -> bool:
        return self.rho_weak < 1.0


def central_data(sys: ParametricLinearSystem, rep: RankOneRepresentation) -> CentralData:
    p_mid, p_rad = sys.p_mid, sys.p_rad
    A_mid, a_mid = sys.evaluate_at(p_mid)
    C = linalg.invert(A_mid)
    x_mid = linalg.solve(A_mid, a_mid)
    y_mid = rep.R @ x_mid
    g_rad = rep.g(p_rad)
    strong = np.abs(rep.R @ C @ rep.L) * g_rad
    weak = np.zeros_like(C)
    for k in range(sys.K):
        if p_rad[k] and np.any(sys.A[k]):
            weak += np.abs(C @ sys.A[k]) * p_rad[k]
    return CentralData(
        C=C,
        x_mid=x_mid,
        y_mid=y_mid,
        rho_strong=linalg.nonneg_spectral_radius(strong),
        rho_weak=linalg.nonneg_spectral_radius(weak),
        p_mid=p_mid,
        p_rad=p_rad,
        a0=sys.a0,
    )


def check_strong_regularity(cd: CentralData) -> bool:
    return cd.rho_strong < 1.0


def check_weak_regularity(cd: CentralData) -> bool:
    return cd.rho_weak < 1.0


@dataclass(frozen=True)
class ReducedSolution:
    y_box: IntervalArray
    iterations: int
    verified: bool


def _centered(rad) -> IntervalArray:
    return IntervalArray.symmetric(rad)


def solve_reduced(cd: CentralData, rep: RankOneRepresentation, p_box: IntervalArray | None = None,
                  max_iter: int = MAX_ITER, tol: float = CONV_TOL) -> ReducedSolution:
    """Enclose the reduced system's solution set by a verified fixed-point iteration.

    Iterates ``Y <- b + (RCL) (D_g (Y - t))`` with ``g`` over the centered
    box, starting from the point ``y_mid``, with epsilon-inflation before each
    step.  Stops as soon as the image lies in the interior of the inflated
    iterate (which proves enclosure) or the iterates stop moving.
    """
    if not check_strong_regularity(cd):
        raise NotStronglyRegular(f"spectral radius {cd.rho_strong:.6g} >= 1")
    p_rad = cd.p_rad if p_box is None else p_box.rad
    M = rep.R @ cd.C @ rep.L
    N = rep.R @ cd.C @ rep.F
    g_box = _centered(rep.g(p_rad))
    t = rep.t
    y_mid = real_iv_matvec(rep.R, IntervalArray.point(cd.x_mid))
    b = y_mid - real_iv_matvec(N, _centered(rep.p_dprime(p_rad)))

    def step(Y):
        return b + real_iv_matvec(M, g_box * (Y - t))

    Y = IntervalArray.point(rep.R @ cd.x_mid)
    for it in range(1, max_iter + 1):
        Y_inf = Y.inflate(INFLATE_REL, INFLATE_ABS)
        Y_new = step(Y_inf)
        if Y_new.interior_subset(Y_inf):
            return ReducedSolution(Y_new, it, True)
        scale = max(1.0, float(np.max(Y_new.mag, initial=0.0)))
        if Y_new.hausdorff(Y) <= tol * scale:
            Y = Y_new
            break
        Y = Y_new
    else:
        raise NoConvergence(f"no convergence after {max_iter} iterations")

    # converged but not yet proven: retry the inclusion with coarser inflation
    for rel in (1e-10, 1e-8, 1e-6):
        Y_inf = Y.inflate(rel, rel * float(np.max(np.abs(Y.mid), initial=0.0)) + INFLATE_ABS)
        Y_new = step(Y_inf)
        if Y_new.interior_subset(Y_inf):
            return ReducedSolution(Y_new, it, True)
    log.warning("reduced-system iterate converged without a verified inclusion")
    return ReducedSolution(Y, it, False)


@dataclass(frozen=True)
class OuterEnclosure:
    x_box: IntervalArray
    y_box: IntervalArray
    iterations: int
    method_tag: str = IGRANK1
    verified: bool = True

    def to_json(self, cd: CentralData | None = None) -> dict:
        out = {"method": self.method_tag}
        if cd is not None:
            out["rho_strong"] = cd.rho_strong
            out["rho_weak"] = cd.rho_weak
        out.update({
            "x": self.x_box.to_json(),
            "y": self.y_box.to_json(),
            "iterations": self.iterations,
            "verified": self.verified,
        })
        return out


def _y_of(y_box) -> tuple[IntervalArray, int, bool]:
    if isinstance(y_box, ReducedSolution):
        return y_box.y_box, y_box.iterations, y_box.verified
    return y_box, 0, True


def outer_enclosure(cd: CentralData, rep: RankOneRepresentation, y_box, p_box: IntervalArray | None = None) -> OuterEnclosure:
    """x_mid - (CF)[-r'', r''] + (CL)(D_{g([-r', r'])} |y - t|)."""
    Y, iters, verified = _y_of(y_box)
    p_rad = cd.p_rad if p_box is None else p_box.rad
    CF = cd.C @ rep.F
    CL = cd.C @ rep.L
    dev = real_iv_matvec(CF, _centered(rep.p_dprime(p_rad)))
    yt_mag = (Y - rep.t).mag
    lin = real_iv_matvec(CL, _centered(rep.g(p_rad)) * yt_mag)
    x = IntervalArray.point(cd.x_mid) - dev + lin
    return OuterEnclosure(x, Y, iters, IGRANK1, verified)


def ignp_enclosure(cd: CentralData, rep: RankOneRepresentation, y_box, p_box: IntervalArray) -> OuterEnclosure:
    """C a_0 + (CF) p'' + (CL)(D_{g(p_mid')} t + D_{g(p_mid' - p')} (y - t))."""
    Y, iters, verified = _y_of(y_box)
    a0 = cd.a0
    CF = cd.C @ rep.F
    CL = cd.C @ rep.L
    p_dd = IntervalArray(rep.p_dprime(p_box.lo), rep.p_dprime(p_box.hi))
    g_mid = rep.g(p_box.mid)
    inner = IntervalArray.point(g_mid * rep.t) + _centered(rep.g(p_box.rad)) * (Y - rep.t)
    x = real_iv_matvec(cd.C, IntervalArray.point(a0)) + real_iv_matvec(CF, p_dd) + real_iv_matvec(CL, inner)
    return OuterEnclosure(x, Y, iters, IGNP, verified)


@dataclass(frozen=True)
class Analysis:
    """Everything derived from a system once: representation, central data, y."""

    sys: ParametricLinearSystem
    rep: RankOneRepresentation
    cd: CentralData
    reduced: ReducedSolution

    def outer(self) -> OuterEnclosure:
        return outer_enclosure(self.cd, self.rep, self.reduced, self.sys.p_box)

    def ignp(self) -> OuterEnclosure:
        return ignp_enclosure(self.cd, self.rep, self.reduced, self.sys.p_box)


def analyze(sys: ParametricLinearSystem, rep: RankOneRepresentation | None = None) -> Analysis:
    if rep is None:
        rep = build_representation(sys)
    cd = central_data(sys, rep)
    return Analysis(sys, rep, cd, solve_reduced(cd, rep, sys.p_box))
