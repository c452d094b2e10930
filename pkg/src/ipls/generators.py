"""Random rank-one test systems, shared by the test suite and experiment scripts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .interval import IntervalArray
from .system import ParametricLinearSystem


@dataclass(frozen=True)
class RandomSystemConfig:
    max_n: int = 6
    max_K: int = 6
    rhs_only_prob: float = 0.2  # parameter appears only in the right-hand side
    in_range_prob: float = 0.4  # a_k parallel to the column factor of A_k
    zero_rhs_prob: float = 0.3
    radius: float = 0.3


def random_rank_one(rng: np.random.Generator, cfg: RandomSystemConfig = RandomSystemConfig(),
                    n: int | None = None, K: int | None = None) -> ParametricLinearSystem:
    """Diagonally dominant ``A0`` plus rank-one perturbations ``p_k u_k v_k^T``.

    Parameter radii are ``cfg.radius`` times a uniform factor; callers that
    need strong regularity shrink the box afterwards.
    """
    n = n or int(rng.integers(2, cfg.max_n + 1))
    K = K or int(rng.integers(1, cfg.max_K + 1))
    A0 = rng.uniform(-1, 1, (n, n))
    np.fill_diagonal(A0, 0.0)
    A0 += np.diag(np.abs(A0).sum(axis=1) + rng.uniform(1.0, 2.0, n))
    A0 *= rng.choice([-1.0, 1.0], size=(n, 1))
    a0 = rng.uniform(-5, 5, n)
    A, a = [], []
    for _ in range(K):
        u, v = rng.normal(size=n), rng.normal(size=n)
        if rng.random() < cfg.rhs_only_prob:
            A.append(np.zeros((n, n)))
            a.append(rng.normal(size=n))
            continue
        A.append(np.outer(u, v) / np.sqrt(n))
        r = rng.random()
        if r < cfg.in_range_prob:
            a.append(rng.normal() * u)
        elif r < cfg.in_range_prob + cfg.zero_rhs_prob:
            a.append(np.zeros(n))
        else:
            a.append(rng.normal(size=n))
    mid = rng.uniform(-1, 1, K)
    rad = cfg.radius * rng.uniform(0.1, 1.0, K)
    return ParametricLinearSystem(A0, a0, tuple(A), tuple(a), IntervalArray(mid - rad, mid + rad))


def strongly_regular(sys: ParametricLinearSystem, target: float = 0.9, max_halvings: int = 40):
    """Shrink the parameter box by halving until the strong condition holds with margin."""
    from .enclosure import central_data
    from .rankone import build_representation

    rep = build_representation(sys)
    for _ in range(max_halvings):
        cd = central_data(sys, rep)
        if cd.rho_strong < target:
            return sys
        sys = sys.scaled(0.5)
    raise ValueError("could not reach strong regularity by shrinking the box")
