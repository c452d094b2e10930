"""Interval parametric linear systems ``A(p) x = a(p)`` with affine dependence.

JSON layout::

    {"n": 3, "K": 2, "names": ["p1", "p2"],
     "A0": [[...], ...], "a0": [...],
     "terms": [{"name": "p1", "A": [[...]], "a": [...], "interval": [lo, hi]}, ...]}

``names`` is optional; omitted ``A``/``a`` in a term mean zero.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .interval import IntervalArray

log = logging.getLogger(__name__)


class SystemFormatError(ValueError):
    """Malformed system document or inconsistent dimensions."""


class UnusedParameter(ValueError):
    pass


@dataclass(frozen=True)
class ParametricLinearSystem:
    A0: np.ndarray
    a0: np.ndarray
    A: tuple  # K matrices, n x n
    a: tuple  # K vectors, length n
    p_box: IntervalArray
    names: tuple = ()

    def __post_init__(self):
        A0 = np.array(self.A0, dtype=float)
        a0 = np.array(self.a0, dtype=float)
        if A0.ndim != 2 or A0.shape[0] != A0.shape[1]:
            raise SystemFormatError(f"A0 must be square, got shape {A0.shape}")
        n = A0.shape[0]
        if a0.shape != (n,):
            raise SystemFormatError(f"a0 must have length {n}, got shape {a0.shape}")
        K = len(self.A)
        if len(self.a) != K or self.p_box.shape != (K,):
            raise SystemFormatError("A, a and p_box must all have K entries")
        A = tuple(np.array(M, dtype=float) for M in self.A)
        a = tuple(np.array(v, dtype=float) for v in self.a)
        for k, (M, v) in enumerate(zip(A, a)):
            if M.shape != (n, n):
                raise SystemFormatError(f"A_{k + 1} has shape {M.shape}, expected {(n, n)}")
            if v.shape != (n,):
                raise SystemFormatError(f"a_{k + 1} has shape {v.shape}, expected {(n,)}")
        for arr in (A0, a0, *A, *a):
            if not np.all(np.isfinite(arr)):
                raise SystemFormatError("non-finite coefficient")
            arr.setflags(write=False)
        names = tuple(self.names) if self.names else tuple(f"p{k + 1}" for k in range(K))
        if len(names) != K:
            raise SystemFormatError(f"{len(names)} names for {K} parameters")
        object.__setattr__(self, "A0", A0)
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "names", names)
        degenerate = [names[k] for k in range(K) if self.p_box.lo[k] == self.p_box.hi[k]]
        if degenerate:
            log.warning("degenerate parameter intervals treated as points: %s", ", ".join(degenerate))

    @property
    def n(self) -> int:
        return self.A0.shape[0]

    @property
    def K(self) -> int:
        return len(self.A)

    @property
    def p_mid(self) -> np.ndarray:
        return self.p_box.mid

    @property
    def p_rad(self) -> np.ndarray:
        return self.p_box.rad

    def evaluate_at(self, p) -> tuple[np.ndarray, np.ndarray]:
        return evaluate_at(self, p)

    def with_box(self, p_box: IntervalArray) -> "ParametricLinearSystem":
        return ParametricLinearSystem(self.A0, self.a0, self.A, self.a, p_box, self.names)

    def scaled(self, factor: float) -> "ParametricLinearSystem":
        """Same system with every parameter radius multiplied by ``factor``."""
        return self.with_box(IntervalArray.from_mid_rad(self.p_mid, factor * self.p_rad))

    def to_json(self) -> dict:
        terms = []
        for k in range(self.K):
            term = {"name": self.names[k], "interval": [self.p_box.lo[k], self.p_box.hi[k]]}
            if np.any(self.A[k]):
                term["A"] = self.A[k].tolist()
            if np.any(self.a[k]):
                term["a"] = self.a[k].tolist()
            terms.append(term)
        return {
            "n": self.n,
            "K": self.K,
            "names": list(self.names),
            "A0": self.A0.tolist(),
            "a0": self.a0.tolist(),
            "terms": terms,
        }


def evaluate_at(sys: ParametricLinearSystem, p) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(p, dtype=float)
    if p.shape != (sys.K,):
        raise ValueError(f"expected {sys.K} parameter values, got shape {p.shape}")
    if sys.K == 0:
        return sys.A0.copy(), sys.a0.copy()
    A = sys.A0 + np.tensordot(p, np.stack(sys.A), axes=1)
    a = sys.a0 + p @ np.stack(sys.a)
    return A, a


def evaluate_batch(sys: ParametricLinearSystem, P) -> tuple[np.ndarray, np.ndarray]:
    """``evaluate_at`` for every row of ``P``; returns stacked (m,n,n), (m,n)."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if sys.K == 0:
        m = P.shape[0]
        return np.broadcast_to(sys.A0, (m, sys.n, sys.n)).copy(), np.broadcast_to(sys.a0, (m, sys.n)).copy()
    A = sys.A0 + np.tensordot(P, np.stack(sys.A), axes=1)
    a = sys.a0 + P @ np.stack(sys.a)
    return A, a


@dataclass(frozen=True)
class ParameterPartition:
    """``pi_prime``: parameters present in the matrix; ``pi_double_prime``: rhs only."""

    pi_prime: tuple = field(default_factory=tuple)
    pi_double_prime: tuple = field(default_factory=tuple)

    @property
    def order(self) -> tuple:
        """Column order used by parameterized solutions: rhs-only first."""
        return self.pi_double_prime + self.pi_prime


def partition_parameters(sys: ParametricLinearSystem) -> ParameterPartition:
    prime, dprime = [], []
    for k in range(sys.K):
        in_matrix = bool(np.any(sys.A[k]))
        in_rhs = bool(np.any(sys.a[k]))
        if in_matrix:
            prime.append(k)
        elif in_rhs:
            dprime.append(k)
        else:
            raise UnusedParameter(f"parameter {sys.names[k]!r} has zero coefficients")
    return ParameterPartition(tuple(prime), tuple(dprime))


def _matrix(data, n, what):
    M = np.array(data, dtype=float)
    if M.shape != (n, n):
        raise SystemFormatError(f"{what} has shape {M.shape}, expected {(n, n)}")
    return M


def _vector(data, n, what):
    v = np.array(data, dtype=float)
    if v.shape != (n,):
        raise SystemFormatError(f"{what} has shape {v.shape}, expected {(n,)}")
    return v


def system_from_dict(doc: dict) -> ParametricLinearSystem:
    try:
        n = int(doc["n"])
        K = int(doc["K"])
        terms = doc["terms"]
        A0 = _matrix(doc["A0"], n, "A0")
        a0 = _vector(doc.get("a0", np.zeros(n)), n, "a0")
    except KeyError as exc:
        raise SystemFormatError(f"missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, SystemFormatError):
            raise
        raise SystemFormatError(str(exc)) from None
    if len(terms) != K:
        raise SystemFormatError(f"K={K} but {len(terms)} terms given")
    names = list(doc.get("names") or [])
    A, a, lo, hi = [], [], [], []
    for k, term in enumerate(terms):
        label = term.get("name") or (names[k] if k < len(names) else f"p{k + 1}")
        if k >= len(names):
            names.append(label)
        A.append(_matrix(term["A"], n, f"A of {label}") if "A" in term else np.zeros((n, n)))
        a.append(_vector(term["a"], n, f"a of {label}") if "a" in term else np.zeros(n))
        try:
            l, h = (float(x) for x in term["interval"])
        except (KeyError, TypeError, ValueError):
            raise SystemFormatError(f"term {label!r} needs an interval [lo, hi]") from None
        if not (np.isfinite(l) and np.isfinite(h)) or l > h:
            raise SystemFormatError(f"bad interval [{l}, {h}] for {label!r}")
        lo.append(l)
        hi.append(h)
    return ParametricLinearSystem(A0, a0, tuple(A), tuple(a), IntervalArray(lo, hi), tuple(names))


def load_system(text: str) -> ParametricLinearSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SystemFormatError("system document must be a JSON object")
    return system_from_dict(doc)


def dump_system(sys: ParametricLinearSystem) -> str:
    return json.dumps(sys.to_json())
