"""Reference systems and published comparison data."""

from __future__ import annotations

import numpy as np

from .interval import IntervalArray
from .system import ParametricLinearSystem

BUILTINS = ("okumura", "example2")


def okumura(delta: float = 0.01) -> ParametricLinearSystem:
    """Five-node resistor chain; p1..p5 ground links, p6..p9 chain links.

    Every parameter ranges over ``[1 - delta, 1 + delta]``.
    """
    n = 5
    A = []
    for i in range(n):
        M = np.zeros((n, n))
        M[i, i] = 1.0
        A.append(M)
    for j in range(n - 1):
        M = np.zeros((n, n))
        M[j, j] = M[j + 1, j + 1] = 1.0
        M[j, j + 1] = M[j + 1, j] = -1.0
        A.append(M)
    K = len(A)
    box = IntervalArray(np.full(K, 1.0 - delta), np.full(K, 1.0 + delta))
    return ParametricLinearSystem(
        A0=np.zeros((n, n)),
        a0=np.array([10.0, 0.0, 10.0, 0.0, 0.0]),
        A=tuple(A),
        a=tuple(np.zeros(n) for _ in range(K)),
        p_box=box,
        names=tuple(f"p{k + 1}" for k in range(K)),
    )


def example2() -> ParametricLinearSystem:
    """3x3 system with rank-one matrix parameters whose hull is not sign-monotone."""
    A0 = np.array([[1.0, 0.25, 0.0], [0.25, 2.0, 0.25], [0.0, 0.25, 3.0]])
    a0 = np.array([-5 / 2, 8 / 3, -9 / 4])

    def unit(i, j):
        M = np.zeros((3, 3))
        M[i, j] = 1.0
        return M

    names = ("p1", "p12", "p2", "p22", "p3")
    A = (unit(1, 0) + unit(1, 2), unit(0, 1) + unit(2, 1), unit(2, 0), unit(0, 2), np.zeros((3, 3)))
    a = tuple(np.zeros(3) for _ in range(4)) + (np.array([-1.0, 1 / 3, 1 / 2]),)
    box = IntervalArray([-0.75, -0.75, -0.5, -0.5, -0.5], [0.75, 0.75, 0.5, 0.5, 0.5])
    return ParametricLinearSystem(A0, a0, A, a, box, names)


def get_builtin(name: str, delta: float = 0.01) -> ParametricLinearSystem:
    if name == "okumura":
        return okumura(delta)
    if name == "example2":
        return example2()
    raise KeyError(f"unknown built-in system {name!r}; choose from {', '.join(BUILTINS)}")


# Published bounds of the direct parameterized method for okumura(0.01).
# Used only as comparison data; that method is not implemented here.
PDM_OKUMURA_001 = {
    "outer": [
        (7.01480, 7.16702),
        (4.11736, 4.24628),
        (5.39331, 5.51578),
        (2.13770, 2.22594),
        (1.06017, 1.12165),
    ],
    "inner": [
        (7.01777, 7.16405),
        (4.12030, 4.24333),
        (5.39609, 5.51300),
        (2.13997, 2.22367),
        (1.06200, 1.11982),
    ],
}
