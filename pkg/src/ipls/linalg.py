"""Dense real linear algebra: guarded LU solves and Perron-root bounds."""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg

SINGULAR_RTOL = 1e-12


class Singular(np.linalg.LinAlgError):
    """Raised when a pivot falls below ``SINGULAR_RTOL * max|A|``."""


def _lu(A: np.ndarray):
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"square matrix required, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    scale = np.max(np.abs(A), initial=0.0)
    if scale == 0.0:
        raise Singular("zero matrix")
    with warnings.catch_warnings():
        # exact zero pivots are reported below as Singular
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    if np.min(np.abs(np.diag(lu))) < SINGULAR_RTOL * scale:
        raise Singular(f"pivot below {SINGULAR_RTOL:g} * max|A|")
    return lu, piv


def solve(A, B) -> np.ndarray:
    """Solve ``A X = B`` with partial-pivoting LU and one refinement step."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if B.shape[0] != A.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    factors = _lu(A)
    X = scipy.linalg.lu_solve(factors, B, check_finite=False)
    X = X + scipy.linalg.lu_solve(factors, B - A @ X, check_finite=False)
    return X


def invert(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    return solve(A, np.eye(A.shape[0]))


def nonneg_spectral_radius(M, tol: float = 1e-12, max_iter: int = 10_000) -> float:
    """Upper-biased estimate of the Perron root of a nonnegative matrix.

    Power iteration on ``M + sI`` (``s`` a norm bound of ``M``) from the all-ones vector.  Each step gives
    Collatz-Wielandt bounds ``min (Mx)_i/x_i <= rho <= max (Mx)_i/x_i``; the
    upper one is returned, so a value below 1 certifies ``rho < 1`` up to
    rounding.  Stops when the bounds meet within ``tol`` or the upper bound
    stagnates (reducible matrices keep the lower bound at 0); the result
    never exceeds the max row or column sum.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"square matrix required, got shape {M.shape}")
    if np.any(M < 0):
        raise ValueError("matrix must be elementwise nonnegative")
    if M.size == 0:
        return 0.0
    norm_bound = min(M.sum(axis=1).max(), M.sum(axis=0).max())
    if norm_bound == 0.0:
        return 0.0

    # shift by a multiple of I scaled to M, so convergence speed is scale-free
    shift = norm_bound
    x = np.ones(M.shape[0])
    best = np.inf
    prev = np.inf
    stalled = 0
    for _ in range(max_iter):
        y = M @ x
        pos = x > 0
        if np.any(y[~pos] > 0):
            # an underflowed entry would make the ratio unbounded; no valid bound this step
            ratio_max = np.inf
        else:
            ratio_max = float(np.max(y[pos] / x[pos]))
        lower = float(np.min(y / x)) if np.all(pos) else 0.0
        best = min(best, ratio_max)
        if abs(ratio_max - prev) <= tol * ratio_max:
            stalled += 1
        else:
            stalled = 0
        prev = ratio_max
        if best - lower <= tol * max(best, 1e-300) or stalled >= 100:
            break
        x = y + shift * x
        x /= x.max()
    return float(min(best, norm_bound))
