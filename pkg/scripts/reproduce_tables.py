"""Print the resistor-chain comparison tables: outer and inner bounds, then the quality rows.

    python3 scripts/reproduce_tables.py            # delta = 0.01 and 0.25
    python3 scripts/reproduce_tables.py --delta 0.1
"""

import argparse

from ipls import analyze, okumura
from ipls.builtins import PDM_OKUMURA_001
from ipls.interval import EMPTY, Interval
from ipls.metrics import quality_rows, render_table
from ipls.parameterized import build_pkrank1, inner_estimate


def table(delta: float) -> str:
    an = analyze(okumura(delta))
    sol = build_pkrank1(an.cd, an.rep, an.reduced, an.sys.p_box, an.sys.names)
    est = inner_estimate(sol, an.sys.p_box)
    outer = an.outer().x_box
    reference = None
    if delta == 0.01:
        reference = [Interval(*b) for b in PDM_OKUMURA_001["outer"]]
    lines = [f"delta = {delta}   rho_strong = {an.cd.rho_strong:.5g}   rho_weak = {an.cd.rho_weak:.5g}",
             f"{'':4}{'outer':>26}{'inner':>26}"]
    for i, (o, c) in enumerate(zip(outer, est.x_in)):
        inner = "empty" if c is EMPTY else f"[{c.lo:.6g}, {c.hi:.6g}]"
        lines.append(f"x{i + 1:<3}{f'[{o.lo:.6g}, {o.hi:.6g}]':>26}{inner:>26}")
    lines += ["", render_table(quality_rows(est.x_in, outer, reference))]
    return "\n".join(lines)


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--delta", type=float, action="append")
    args = ap.parse_args()
    print("\n\n".join(table(d) for d in args.delta or [0.01, 0.25]))


if __name__ == "__main__":
    main()
