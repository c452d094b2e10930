"""Brute-force reference computations: batched point solves and sampled hulls.

Sampling uses numpy's PCG64 generator seeded through ``SeedSequence``;
``spawn`` gives independent streams, so chunks can be drawn (and merged by
hull reduction) in any order without changing the result.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .interval import IntervalArray
from .system import ParametricLinearSystem, evaluate_batch

UNIFORM = "uniform"
VERTICES_PLUS_UNIFORM = "vertices-plus-uniform"
MAX_SINGULAR_FRACTION = 0.01
_CHUNK = 4096


class NearSingularBox(RuntimeError):
    pass


def batch_solve(sys: ParametricLinearSystem, P) -> tuple[np.ndarray, np.ndarray]:
    """Point solutions ``A(p)^{-1} a(p)`` for each row of ``P``.

    Returns ``(X, ok)``; rows whose matrix is singular (or numerically so)
    are NaN in ``X`` and False in ``ok``.
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    X = np.full((P.shape[0], sys.n), np.nan)
    ok = np.zeros(P.shape[0], dtype=bool)
    for start in range(0, P.shape[0], _CHUNK):
        sl = slice(start, start + _CHUNK)
        A, a = evaluate_batch(sys, P[sl])
        try:
            X[sl] = np.linalg.solve(A, a[..., None])[..., 0]
            ok[sl] = True
        except np.linalg.LinAlgError:
            for j in range(A.shape[0]):
                try:
                    X[start + j] = np.linalg.solve(A[j], a[j])
                    ok[start + j] = True
                except np.linalg.LinAlgError:
                    pass
        # guard against matrices that are singular only up to rounding
        cond = np.linalg.cond(A)
        bad = ~np.isfinite(cond) | (cond > 1e14)
        ok[sl] &= ~bad
    X[~ok] = np.nan
    return X, ok


def solve_error_bounds(sys: ParametricLinearSystem, P, X) -> np.ndarray:
    """Componentwise a-posteriori bounds on ``|X - A(p)^{-1} a(p)|`` for computed solves.

    With residual ``r = A x - a`` the error is ``|A^{-1} r|``.  The residual
    itself and the assembly of ``A(p)`` are computed in floating point, so
    ``|r|`` is padded by ``(n + K + 2) eps (|A_0| + sum |p_k||A_k|)|x| + |a|``
    terms, and the result is doubled to cover the approximate inverse.
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    X = np.atleast_2d(np.asarray(X, dtype=float))
    A, a = evaluate_batch(sys, P)
    absA = np.abs(sys.A0) + np.einsum("mk,kij->mij", np.abs(P), np.abs(np.asarray(sys.A)).reshape(sys.K, sys.n, sys.n))
    absa = np.abs(sys.a0) + np.abs(P) @ np.abs(np.asarray(sys.a)).reshape(sys.K, sys.n)
    r = np.einsum("mij,mj->mi", A, X) - a
    pad = (sys.n + sys.K + 2) * np.finfo(float).eps * (np.einsum("mij,mj->mi", absA, np.abs(X)) + absa)
    Ainv = np.linalg.inv(A)
    return 2.0 * np.einsum("mij,mj->mi", np.abs(Ainv), np.abs(r) + pad)


def vertices(sys: ParametricLinearSystem) -> tuple[np.ndarray, np.ndarray]:
    """All ``2^K`` sign patterns and the corresponding box vertices."""
    V = np.array(list(itertools.product((-1.0, 1.0), repeat=sys.K))).reshape(-1, sys.K)
    return V, sys.p_mid + V * sys.p_rad


@dataclass(frozen=True)
class SampleHull:
    hull_lower_bound: IntervalArray
    sample_count: int
    seed: int
    singular_count: int = 0
    strategy: str = UNIFORM

    def to_json(self) -> dict:
        return {
            "hull_lower_bound": self.hull_lower_bound.to_json(),
            "sample_count": self.sample_count,
            "seed": self.seed,
            "singular_count": self.singular_count,
            "strategy": self.strategy,
        }


def sample_points(sys: ParametricLinearSystem, count: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    return sys.p_box.lo + (sys.p_box.hi - sys.p_box.lo) * rng.random((count, sys.K))


def sample_hull(sys: ParametricLinearSystem, count: int = 10_000, seed: int = 0,
                strategy: str = UNIFORM) -> SampleHull:
    """Componentwise hull of point solutions at sampled parameter values."""
    if strategy not in (UNIFORM, VERTICES_PLUS_UNIFORM):
        raise ValueError(f"unknown strategy {strategy!r}")
    P = sample_points(sys, count, seed)
    if strategy == VERTICES_PLUS_UNIFORM:
        P = np.vstack([vertices(sys)[1], P])
    X, ok = batch_solve(sys, P)
    n_bad = int((~ok).sum())
    if n_bad > MAX_SINGULAR_FRACTION * len(P):
        raise NearSingularBox(f"{n_bad} of {len(P)} sampled matrices are singular")
    X = X[ok]
    return SampleHull(IntervalArray(X.min(axis=0), X.max(axis=0)), len(P), seed, n_bad, strategy)
