"""Quality measures for enclosures and the comparison tables built from them."""

from __future__ import annotations

from dataclasses import dataclass

from .interval import EMPTY, Interval


class MetricError(ValueError):
    pass


def sharpness(inner, outer: Interval) -> float:
    """rad(inner) / rad(outer); 0 for an empty inner estimate."""
    if inner is EMPTY or inner is None:
        return 0.0
    if outer.rad == 0.0:
        if inner.rad == 0.0:
            return 1.0
        raise MetricError("outer interval is degenerate but the inner one is not")
    return inner.rad / outer.rad


def overestimation(x: Interval, y: Interval) -> float:
    """Percentage by which ``y`` overestimates ``x`` (requires ``x`` inside ``y``)."""
    if not x.subset(y):
        raise MetricError(f"{x!r} is not contained in {y!r}")
    if y.rad == 0.0:
        raise MetricError("reference interval is degenerate")
    return (1.0 - x.rad / y.rad) * 100.0


@dataclass(frozen=True)
class QualityRow:
    component: int
    O_s: float
    O_w: float | None = None

    def to_json(self) -> dict:
        return {"component": self.component, "O_s": self.O_s, "O_w": self.O_w}


def quality_rows(inner, outer, reference=None) -> list[QualityRow]:
    """One row per component.  ``reference`` is a wider outer enclosure for O_w."""
    rows = []
    for i, (xin, xout) in enumerate(zip(inner, outer)):
        ow = overestimation(xout, reference[i]) if reference is not None else None
        rows.append(QualityRow(i + 1, sharpness(xin, xout), ow))
    return rows


def render_table(rows: list[QualityRow], label: str = "pKRank1") -> str:
    head = "".ljust(14) + "".join(f"x{r.component}".rjust(9) for r in rows)
    lines = [head, f"O_s, {label}".ljust(14) + "".join(f"{r.O_s:9.3f}" for r in rows)]
    if rows and rows[0].O_w is not None:
        lines.append("% overest.".ljust(14) + "".join(f"{r.O_w:9.3f}" for r in rows))
    return "\n".join(lines)
