"""Proper and directed (Kaucher) intervals, plus numpy-backed interval arrays.

Two rounding modes are available.  In ``fast`` mode endpoints are computed
with the default round-to-nearest arithmetic.  In ``rigorous`` mode every
lower endpoint is pushed one ulp down and every upper endpoint one ulp up
after it is computed, and dot products are widened by the classical
recursive-summation error bound, so results always contain the exact range.
"""

from __future__ import annotations

import contextvars
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

FAST = "fast"
RIGOROUS = "rigorous"
_MODES = (FAST, RIGOROUS)

_rounding = contextvars.ContextVar("ipls_rounding", default=FAST)
_EPS = np.finfo(float).eps


def get_rounding() -> str:
    return _rounding.get()


def set_rounding(mode: str) -> None:
    if mode not in _MODES:
        raise ValueError(f"unknown rounding mode {mode!r}")
    _rounding.set(mode)


@contextmanager
def rounding(mode: str):
    """Temporarily switch the rounding mode (``fast`` or ``rigorous``)."""
    if mode not in _MODES:
        raise ValueError(f"unknown rounding mode {mode!r}")
    token = _rounding.set(mode)
    try:
        yield
    finally:
        _rounding.reset(token)


def _rigorous() -> bool:
    return _rounding.get() == RIGOROUS


def round_down(x):
    if _rigorous():
        return np.nextafter(x, -np.inf)
    return x


def round_up(x):
    if _rigorous():
        return np.nextafter(x, np.inf)
    return x


def _sum_bounds(lo_terms: np.ndarray, hi_terms: np.ndarray, axis: int = -1):
    lo = lo_terms.sum(axis=axis)
    hi = hi_terms.sum(axis=axis)
    if _rigorous():
        # |fl(sum) - sum| <= (n-1) eps sum|x_i| for recursive summation
        n = lo_terms.shape[axis]
        k = max(n - 1, 0) * _EPS
        lo = np.nextafter(lo - k * np.abs(lo_terms).sum(axis=axis), -np.inf)
        hi = np.nextafter(hi + k * np.abs(hi_terms).sum(axis=axis), np.inf)
    return lo, hi


class _Empty:
    """The empty set.  Kept apart from improper Kaucher intervals on purpose."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EMPTY"

    def __bool__(self):
        return False

    def to_json(self):
        return None


EMPTY = _Empty()


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise ValueError(f"non-finite interval endpoints [{lo}, {hi}]")
        if lo > hi:
            raise ValueError(f"improper interval [{lo}, {hi}]; use KaucherInterval")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @property
    def mid(self) -> float:
        return 0.5 * self.lo + 0.5 * self.hi

    @property
    def rad(self) -> float:
        return round_up(0.5 * self.hi - 0.5 * self.lo)

    @property
    def mag(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def __add__(self, other):
        other = _as_interval(other)
        return Interval(round_down(self.lo + other.lo), round_up(self.hi + other.hi))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_interval(other)
        return Interval(round_down(self.lo - other.hi), round_up(self.hi - other.lo))

    def __rsub__(self, other):
        return _as_interval(other) - self

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other):
        if not isinstance(other, Interval):
            return scale(float(other), self)
        p = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(round_down(min(p)), round_up(max(p)))

    __rmul__ = __mul__

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def subset(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def interior_subset(self, other: "Interval") -> bool:
        return other.lo < self.lo and self.hi < other.hi

    def hull(self, other: "Interval") -> "Interval":
        return hull(self, other)

    def intersect(self, other: "Interval"):
        return intersect(self, other)

    def to_json(self):
        return [self.lo, self.hi]

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __repr__(self):
        return f"[{self.lo:.6g}, {self.hi:.6g}]"


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(float(x))


def add(a: Interval, b: Interval) -> Interval:
    return a + b


def sub(a: Interval, b: Interval) -> Interval:
    return a - b


def mul(a: Interval, b: Interval) -> Interval:
    return a * b


def scale(c: float, a: Interval) -> Interval:
    lo, hi = c * a.lo, c * a.hi
    if c < 0:
        lo, hi = hi, lo
    return Interval(round_down(lo), round_up(hi))


def mid(a) -> float:
    return a.mid


def rad(a) -> float:
    return a.rad


def mag(a) -> float:
    return a.mag


def hull(a: Interval, b: Interval) -> Interval:
    return Interval(min(a.lo, b.lo), max(a.hi, b.hi))


def intersect(a: Interval, b: Interval):
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo > hi:
        return EMPTY
    return Interval(lo, hi)


def contains(a: Interval, x: float) -> bool:
    return a.contains(x)


def subset(a: Interval, b: Interval) -> bool:
    return a.subset(b)


@dataclass(frozen=True)
class KaucherInterval:
    """Directed interval; ``lo > hi`` encodes an improper interval.

    Only the operations needed for inner estimation are provided: addition,
    the dual (endpoint swap) and scaling by reals.
    """

    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))

    @classmethod
    def from_interval(cls, a: Interval) -> "KaucherInterval":
        return cls(a.lo, a.hi)

    @property
    def is_proper(self) -> bool:
        return self.lo <= self.hi

    def dual(self) -> "KaucherInterval":
        return KaucherInterval(self.hi, self.lo)

    def __add__(self, other):
        if isinstance(other, Interval):
            other = KaucherInterval.from_interval(other)
        elif not isinstance(other, KaucherInterval):
            other = KaucherInterval(other, other)
        return KaucherInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def scale(self, c: float) -> "KaucherInterval":
        # multiplication by a negative real reverses direction: c*[a,b] = [cb, ca]
        if c >= 0:
            return KaucherInterval(c * self.lo, c * self.hi)
        return KaucherInterval(c * self.hi, c * self.lo)

    def to_interval(self):
        """The proper interval, or EMPTY when the endpoints are crossed."""
        if self.lo > self.hi:
            return EMPTY
        return Interval(self.lo, self.hi)

    def to_json(self):
        return [self.lo, self.hi]


def dual(a) -> KaucherInterval:
    if isinstance(a, Interval):
        a = KaucherInterval.from_interval(a)
    return a.dual()


def kaucher_add(a, b) -> KaucherInterval:
    if isinstance(a, Interval):
        a = KaucherInterval.from_interval(a)
    return a + b


class IntervalArray:
    """Interval vector or matrix stored as two float arrays of equal shape.

    Instances are immutable; the underlying arrays are flagged read-only.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None, *, check: bool = True):
        lo = np.array(lo, dtype=float)
        hi = lo.copy() if hi is None else np.array(hi, dtype=float)
        if lo.shape != hi.shape:
            raise ValueError(f"endpoint shapes differ: {lo.shape} vs {hi.shape}")
        if check:
            if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
                raise ValueError("non-finite interval endpoints")
            if np.any(lo > hi):
                raise ValueError("improper interval component")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("IntervalArray is immutable")

    # construction

    @classmethod
    def point(cls, x) -> "IntervalArray":
        return cls(x, x)

    @classmethod
    def symmetric(cls, r) -> "IntervalArray":
        r = np.asarray(r, dtype=float)
        return cls(-r, r)

    @classmethod
    def from_mid_rad(cls, m, r) -> "IntervalArray":
        m = np.asarray(m, dtype=float)
        r = np.asarray(r, dtype=float)
        return cls(round_down(m - r), round_up(m + r))

    @classmethod
    def from_intervals(cls, items: Sequence[Interval]) -> "IntervalArray":
        return cls([a.lo for a in items], [a.hi for a in items])

    @classmethod
    def from_json(cls, data) -> "IntervalArray":
        arr = np.array(data, dtype=float)
        if arr.ndim == 0 or arr.shape[-1] != 2:
            raise ValueError("interval data must end in [lo, hi] pairs")
        return cls(arr[..., 0], arr[..., 1])

    def to_json(self):
        return np.stack([self.lo, self.hi], axis=-1).tolist()

    # shape protocol

    @property
    def shape(self):
        return self.lo.shape

    @property
    def ndim(self):
        return self.lo.ndim

    def __len__(self):
        return len(self.lo)

    def __getitem__(self, idx):
        lo, hi = self.lo[idx], self.hi[idx]
        if np.ndim(lo) == 0:
            return Interval(lo, hi)
        return IntervalArray(lo, hi, check=False)

    def __iter__(self) -> Iterator:
        for i in range(len(self)):
            yield self[i]

    def __repr__(self):
        return f"IntervalArray({self.to_json()!r})"

    # mid / rad / mag

    @property
    def mid(self) -> np.ndarray:
        return 0.5 * self.lo + 0.5 * self.hi

    @property
    def rad(self) -> np.ndarray:
        return round_up(0.5 * self.hi - 0.5 * self.lo)

    @property
    def mag(self) -> np.ndarray:
        return np.maximum(np.abs(self.lo), np.abs(self.hi))

    # arithmetic

    def __add__(self, other):
        if isinstance(other, IntervalArray):
            return IntervalArray(round_down(self.lo + other.lo), round_up(self.hi + other.hi), check=False)
        other = np.asarray(other, dtype=float)
        return IntervalArray(round_down(self.lo + other), round_up(self.hi + other), check=False)

    __radd__ = __add__

    def __neg__(self):
        return IntervalArray(-self.hi, -self.lo, check=False)

    def __sub__(self, other):
        if isinstance(other, IntervalArray):
            return IntervalArray(round_down(self.lo - other.hi), round_up(self.hi - other.lo), check=False)
        other = np.asarray(other, dtype=float)
        return IntervalArray(round_down(self.lo - other), round_up(self.hi - other), check=False)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Elementwise product with an interval array or a real array/scalar."""
        if isinstance(other, IntervalArray):
            lo, hi = _mul_bounds(self.lo, self.hi, other.lo, other.hi)
        else:
            c = np.asarray(other, dtype=float)
            a, b = c * self.lo, c * self.hi
            lo, hi = np.minimum(a, b), np.maximum(a, b)
        return IntervalArray(round_down(lo), round_up(hi), check=False)

    __rmul__ = __mul__

    # lattice

    def contains(self, x) -> bool:
        if isinstance(x, IntervalArray):
            return x.subset(self)
        x = np.asarray(x, dtype=float)
        return bool(np.all((self.lo <= x) & (x <= self.hi)))

    def contains_mask(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return (self.lo <= x) & (x <= self.hi)

    def subset(self, other: "IntervalArray") -> bool:
        return bool(np.all((other.lo <= self.lo) & (self.hi <= other.hi)))

    def interior_subset(self, other: "IntervalArray") -> bool:
        return bool(np.all((other.lo < self.lo) & (self.hi < other.hi)))

    def hull(self, other: "IntervalArray") -> "IntervalArray":
        return IntervalArray(np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi), check=False)

    def intersect(self, other: "IntervalArray"):
        lo, hi = np.maximum(self.lo, other.lo), np.minimum(self.hi, other.hi)
        if np.any(lo > hi):
            return EMPTY
        return IntervalArray(lo, hi, check=False)

    def hausdorff(self, other: "IntervalArray") -> float:
        return float(np.max(np.maximum(np.abs(self.lo - other.lo), np.abs(self.hi - other.hi)), initial=0.0))

    def inflate(self, rel: float, abs_: float = 0.0) -> "IntervalArray":
        m, r = self.mid, self.rad
        return IntervalArray.from_mid_rad(m, r * (1.0 + rel) + abs_)


def _mul_bounds(alo, ahi, blo, bhi):
    p1, p2, p3, p4 = alo * blo, alo * bhi, ahi * blo, ahi * bhi
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    return lo, hi


def real_iv_matvec(M, v: IntervalArray) -> IntervalArray:
    """Enclosure of ``{M x : x in v}`` for a real matrix ``M``."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: {M.shape} x {v.shape}")
    a, b = M * v.lo, M * v.hi
    lo, hi = _sum_bounds(round_down(np.minimum(a, b)), round_up(np.maximum(a, b)))
    return IntervalArray(lo, hi, check=False)


def iv_matvec(M: IntervalArray, v: IntervalArray) -> IntervalArray:
    if M.ndim != 2 or M.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: {M.shape} x {v.shape}")
    lo, hi = _mul_bounds(M.lo, M.hi, v.lo[None, :], v.hi[None, :])
    lo, hi = _sum_bounds(round_down(lo), round_up(hi))
    return IntervalArray(lo, hi, check=False)


def real_dot_bounds(M, x) -> tuple[np.ndarray, np.ndarray]:
    """Lower and upper bounds on the real product ``M @ x``."""
    M = np.asarray(M, dtype=float)
    terms = M * np.asarray(x, dtype=float)
    return _sum_bounds(round_down(terms), round_up(terms))
