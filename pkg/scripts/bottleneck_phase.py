#!/usr/bin/env python3
"""Bottleneck-graph detection experiment.

For two cliques (sizes n and m = round(sqrt(n)) by default) joined by a
weight-w bridge, emits the exact bridge separation probability over a q-grid
and locates the half-crossing q*, which should sit at the order of w/m while
w stays below the clique scale. Optionally adds Monte Carlo estimates for a
non-bridge cross-clique pair, for which no closed form exists.

    python3 scripts/bottleneck_phase.py --n 400 --m 20 --w 1.0 > bottleneck.csv
"""

import argparse
import math
import sys

import numpy as np

from lepart import Bottleneck, bottleneck_quantities
from lepart.estimators import CorrelationQuery, sweep


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=400)
    ap.add_argument("--m", type=int, default=0, help="small clique size (default round(sqrt(n)))")
    ap.add_argument("--w", type=float, default=1.0)
    ap.add_argument("--q-grid", default="1e-4:1e2:25", help="lo:hi:count, log spaced")
    ap.add_argument("--replicas", type=int, default=0, help="add MC for a cross-clique pair")
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()
    m = args.m or round(math.sqrt(args.n))
    lo, hi, count = args.q_grid.split(":")
    grid = list(np.logspace(math.log10(float(lo)), math.log10(float(hi)), int(count)))

    queries = [CorrelationQuery("bridge", 0, args.n)]
    if args.replicas > 0:
        queries.append(CorrelationQuery("across", 1, args.n + 1))
    table = sweep(Bottleneck(args.n, m, args.w), grid, queries, args.replicas, args.seed)

    qlo, qhi = grid[0], grid[-1]
    for _ in range(200):
        mid = math.sqrt(qlo * qhi)
        if bottleneck_quantities(args.n, m, args.w, mid).bridge < 0.5:
            qlo = mid
        else:
            qhi = mid
    print(f"# bottleneck n={args.n} m={m} w={args.w}; bridge half-crossing q*={math.sqrt(qlo*qhi):.6g}, w/m={args.w/m:.6g}")
    sys.stdout.write(table.to_csv())
    return 0


if __name__ == "__main__":
    sys.exit(main())
