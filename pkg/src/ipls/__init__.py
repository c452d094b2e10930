"""Parametric interval linear systems with rank-one uncertainty structure."""

from .builtins import example2, get_builtin, okumura
from .enclosure import (
    Analysis,
    NoConvergence,
    NotStronglyRegular,
    OuterEnclosure,
    analyze,
    central_data,
    ignp_enclosure,
    outer_enclosure,
    solve_reduced,
)
from .hull import Verdict, danger_check, hull_by_signs, hull_report, sign_matrix, vertex_oracle
from .interval import EMPTY, FAST, RIGOROUS, Interval, IntervalArray, KaucherInterval, rounding
from .metrics import overestimation, sharpness
from .oracle import sample_hull
from .parameterized import build_pkrank1, build_pprank1, evaluate_param, inner_estimate
from .rankone import build_representation, verify_representation
from .system import ParametricLinearSystem, load_system, partition_parameters

__all__ = [
    "EMPTY", "FAST", "RIGOROUS", "Analysis", "Interval", "IntervalArray", "KaucherInterval",
    "NoConvergence", "NotStronglyRegular", "OuterEnclosure", "ParametricLinearSystem", "Verdict",
    "analyze", "build_pkrank1", "build_pprank1", "build_representation", "central_data",
    "danger_check", "evaluate_param", "example2", "get_builtin", "hull_by_signs", "hull_report",
    "ignp_enclosure", "inner_estimate", "load_system", "okumura", "outer_enclosure",
    "overestimation", "partition_parameters", "rounding", "sample_hull", "sharpness",
    "sign_matrix", "solve_reduced", "verify_representation", "vertex_oracle",
]
