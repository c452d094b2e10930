"""Rank-one representation of the parameter dependence.

The matrix part ``sum_k p_k A_k`` over matrix parameters is rewritten as
``L D_g R`` where ``g`` repeats each parameter ``gamma_k = rank(A_k)`` times,
and the right-hand side as ``L D_g t + F p''`` (``F`` collects the vectors of
rhs-only parameters).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .system import ParameterPartition, ParametricLinearSystem, partition_parameters

RANK_TOL = 1e-10


class FactorizationError(ValueError):
    pass


def rank_factorize(A, tol: float = RANK_TOL):
    """Rank-revealing factorization ``A = L R`` by complete-pivoting elimination.

    Returns ``(L, R, rank)`` with ``L`` of shape (n, rank) and ``R`` of shape
    (rank, n).  Elimination stops once the largest remaining entry drops below
    ``tol`` times the first pivot.  Each column of ``L`` is scaled so its
    largest-magnitude entry is 1 in absolute value and its first nonzero entry
    is positive; ``R`` absorbs the scale.
    """
    S = np.array(A, dtype=float)
    if S.ndim != 2:
        raise ValueError("matrix required")
    first = np.max(np.abs(S), initial=0.0)
    if first == 0.0:
        raise FactorizationError("zero matrix has no rank-one factors")
    cols, rows = [], []
    while len(cols) < min(S.shape):
        i, j = np.unravel_index(np.argmax(np.abs(S)), S.shape)
        piv = S[i, j]
        if abs(piv) < tol * first:
            break
        l = S[:, j] / piv
        r = S[i, :].copy()
        S = S - np.outer(l, r)
        # exact zeros in the pivot row/column
        S[i, :] = 0.0
        S[:, j] = 0.0
        cols.append(l)
        rows.append(r)
    L = np.array(cols).T
    R = np.array(rows)
    for c in range(L.shape[1]):
        col = L[:, c]
        big = np.max(np.abs(col))
        first_nz = col[np.flatnonzero(np.abs(col) > tol * big)[0]]
        s = big * np.sign(first_nz)
        L[:, c] /= s
        R[c, :] *= s
    return L, R, L.shape[1]


@dataclass(frozen=True)
class RankOneRepresentation:
    L: np.ndarray  # n x gamma
    R: np.ndarray  # gamma x n
    F: np.ndarray  # n x |pi''|
    t: np.ndarray  # gamma
    gamma_k: tuple  # block sizes, one per pi' parameter
    block_index: np.ndarray  # gamma -> position of the parameter within pi'
    partition: ParameterPartition
    augmented: tuple = ()  # pi' positions whose block carries an extra rhs column
    transposed: bool = False

    @property
    def gamma(self) -> int:
        return int(sum(self.gamma_k))

    @property
    def n(self) -> int:
        return self.L.shape[0] if self.L.size else self.F.shape[0]

    def expand(self, values_prime) -> np.ndarray:
        """Replicate a vector indexed by pi' into the gamma-long g-vector."""
        values_prime = np.asarray(values_prime, dtype=float)
        return values_prime[self.block_index]

    def collapse(self, g) -> np.ndarray:
        """Inverse of ``expand``: one representative per block."""
        g = np.asarray(g, dtype=float)
        starts = np.cumsum((0,) + tuple(self.gamma_k[:-1])) if self.gamma_k else []
        return g[np.asarray(starts, dtype=int)]

    def g(self, p) -> np.ndarray:
        """``g(p_{pi'})`` for a full K-vector ``p``."""
        p = np.asarray(p, dtype=float)
        return self.expand(p[list(self.partition.pi_prime)])

    def p_dprime(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return p[list(self.partition.pi_double_prime)]

    def to_json(self) -> dict:
        return {
            "L": self.L.tolist(),
            "R": self.R.tolist(),
            "F": self.F.tolist(),
            "t": self.t.tolist(),
            "gamma_k": list(self.gamma_k),
            "pi_prime": list(self.partition.pi_prime),
            "pi_double_prime": list(self.partition.pi_double_prime),
            "augmented": list(self.augmented),
            "transposed": self.transposed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _factor_block(A_k, a_k, tol):
    L_k, R_k, rank = rank_factorize(A_k, tol)
    if not np.any(a_k):
        return L_k, R_k, np.zeros(rank), False
    t_k, *_ = np.linalg.lstsq(L_k, a_k, rcond=None)
    resid = np.max(np.abs(L_k @ t_k - a_k))
    if resid <= tol * max(1.0, np.max(np.abs(a_k))):
        return L_k, R_k, t_k, False
    # a_k outside range(L_k): carry it as an extra column with a zero R row
    L_k = np.column_stack([L_k, a_k])
    R_k = np.vstack([R_k, np.zeros(R_k.shape[1])])
    t_k = np.concatenate([np.zeros(rank), [1.0]])
    return L_k, R_k, t_k, True


def build_representation(sys: ParametricLinearSystem, part: ParameterPartition | None = None,
                         tol: float = RANK_TOL) -> RankOneRepresentation:
    if part is None:
        part = partition_parameters(sys)
    n = sys.n
    Ls, Rs, ts, gk, blocks, aug = [], [], [], [], [], []
    for pos, k in enumerate(part.pi_prime):
        A_k = sys.A[k]
        # rank(A) == rank(A^T), so both orientations give the same gamma_k; the
        # tie-break keeps the untransposed form.
        L_k, R_k, t_k, extra = _factor_block(A_k, sys.a[k], tol)
        Ls.append(L_k)
        Rs.append(R_k)
        ts.append(t_k)
        gk.append(L_k.shape[1])
        blocks.extend([pos] * L_k.shape[1])
        if extra:
            aug.append(pos)
    L = np.hstack(Ls) if Ls else np.zeros((n, 0))
    R = np.vstack(Rs) if Rs else np.zeros((0, n))
    t = np.concatenate(ts) if ts else np.zeros(0)
    F = np.column_stack([sys.a[k] for k in part.pi_double_prime]) if part.pi_double_prime else np.zeros((n, 0))
    for arr in (L, R, t, F):
        arr.setflags(write=False)
    return RankOneRepresentation(
        L=L, R=R, F=F, t=t,
        gamma_k=tuple(gk),
        block_index=np.array(blocks, dtype=int),
        partition=part,
        augmented=tuple(aug),
        transposed=False,
    )


@dataclass
class VerificationResult:
    ok: bool
    matrix_error: float = 0.0
    rhs_error: float = 0.0
    diagnostics: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_representation(sys: ParametricLinearSystem, rep: RankOneRepresentation,
                          samples: int = 100, seed: int = 0, rtol: float = 1e-10) -> VerificationResult:
    """Check ``A_0 + L D_g R == A(p)`` and the rhs identity at random box points."""
    rng = np.random.default_rng(seed)
    lo, hi = sys.p_box.lo, sys.p_box.hi
    scale = max(1.0, np.max(np.abs(sys.A0)), np.max(np.abs(sys.a0)),
                *(np.max(np.abs(M)) for M in sys.A), *(np.max(np.abs(v), initial=0) for v in sys.a))
    worst_A = worst_a = 0.0
    diags = []
    for s in range(samples):
        p = lo + (hi - lo) * rng.random(sys.K)
        A, a = sys.evaluate_at(p)
        g = rep.g(p)
        A_rep = sys.A0 + (rep.L * g) @ rep.R
        a_rep = sys.a0 + rep.L @ (g * rep.t) + rep.F @ rep.p_dprime(p)
        eA = float(np.max(np.abs(A_rep - A)))
        ea = float(np.max(np.abs(a_rep - a)))
        worst_A, worst_a = max(worst_A, eA), max(worst_a, ea)
        if eA > rtol * scale or ea > rtol * scale:
            diags.append(f"sample {s}: matrix error {eA:.3g}, rhs error {ea:.3g}")
    return VerificationResult(not diags, worst_A, worst_a, diags)
