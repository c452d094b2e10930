"""Show the sign-based hull failing on the 3x3 example, and scan random systems for the same failure.

    python3 scripts/danger_example.py --random 200 --seed 1
"""

import argparse
from collections import Counter

import numpy as np

from ipls import analyze, example2
from ipls.generators import random_rank_one, strongly_regular
from ipls.hull import hull_report, vertex_exact


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--random", type=int, default=100, help="number of random systems to scan")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rep = hull_report(analyze(example2()))
    print(rep.render())
    for i in rep.strictly_inside(1e-6):
        h, o = rep.endpoint.hull[i], rep.oracle.hull[i]
        print(f"x{i + 1}: sign-based box misses {o.rad - h.rad:.4g} of the true half-width {o.rad:.4g}")

    rng = np.random.default_rng(args.seed)
    tally = {src: Counter() for src in ("from-param", "gradient")}
    scanned = 0
    while scanned < args.random:
        sys = strongly_regular(random_rank_one(rng))
        if not vertex_exact(sys):
            continue
        scanned += 1
        an = analyze(sys)
        for src in tally:
            tally[src].update(v.value for v in hull_report(an, signs=src).verdicts)
    print(f"\nverdicts over {scanned} random vertex-exact systems (one per solution component):")
    for src, c in tally.items():
        print(f"  {src:<11} " + ", ".join(f"{k} {c[k]}" for k in ("Sound", "Mismatch", "ZeroCoefficient")))


if __name__ == "__main__":
    main()
