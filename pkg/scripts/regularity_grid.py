"""Compare the two regularity conditions as parameter radii grow.

For each random system the radii are scaled over a grid and both spectral
radii are recorded.  Prints how often each condition holds alone, and the
largest ratio rho_strong / rho_weak seen (never above 1 for rank-one
parameter matrices).

    python3 scripts/regularity_grid.py --systems 100 --seed 9
"""

import argparse

import numpy as np

from ipls import okumura
from ipls.enclosure import central_data
from ipls.generators import random_rank_one
from ipls.rankone import build_representation


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--systems", type=int, default=100)
    ap.add_argument("--seed", type=int, default=9)
    ap.add_argument("--points", type=int, default=21)
    args = ap.parse_args()

    grid = np.geomspace(0.05, 5.0, args.points)
    rng = np.random.default_rng(args.seed)
    both = strong_only = weak_only = neither = 0
    worst_ratio = 0.0
    for _ in range(args.systems):
        base = random_rank_one(rng)
        rep = build_representation(base)
        for f in grid:
            cd = central_data(base.scaled(f), rep)
            s, w = cd.strongly_regular, cd.weakly_regular
            both += s and w
            strong_only += s and not w
            weak_only += w and not s
            neither += not (s or w)
            if cd.rho_weak > 0:
                worst_ratio = max(worst_ratio, cd.rho_strong / cd.rho_weak)
    print(f"{args.systems} systems x {args.points} scalings")
    print(f"  both hold {both}, strong only {strong_only}, weak only {weak_only}, neither {neither}")
    print(f"  max rho_strong / rho_weak = {worst_ratio:.6f}")

    print("\nresistor chain:")
    print(f"  {'delta':>6} {'rho_strong':>11} {'rho_weak':>9}")
    for delta in (0.01, 0.1, 0.25, 0.4, 0.45, 0.5):
        sys = okumura(delta)
        cd = central_data(sys, build_representation(sys))
        print(f"  {delta:>6} {cd.rho_strong:>11.4f} {cd.rho_weak:>9.4f}")


if __name__ == "__main__":
    main()
