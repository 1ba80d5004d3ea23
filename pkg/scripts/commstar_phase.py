#!/usr/bin/env python3
"""Finite-n phase diagram of the community star.

Sweeps the (alpha, beta) plane with q = n^alpha and w = n^beta, k fixed, and
emits a CSV of the exact center separation probabilities for both leaf
classes next to the asymptotic limit table, so the plateau constants
(1/2, (k+3)/(2k+8), (k+1)/(2k+4)) and the 0/1 regions can be eyeballed or
plotted.

    python3 scripts/commstar_phase.py --n 200 --k 3 > commstar_phase.csv
"""

import argparse
import sys

import numpy as np

from lepart import community_star_center_limit, community_star_quantities


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--alpha", default="-1.5:1.5:13", help="lo:hi:count")
    ap.add_argument("--beta", default="-2.0:1.0:13", help="lo:hi:count")
    args = ap.parse_args()

    def grid(text):
        lo, hi, count = text.split(":")
        return np.linspace(float(lo), float(hi), int(count))

    print(f"# community star n={args.n} k={args.k}; q=n^alpha, w=n^beta")
    print("alpha,beta,u_center_v1,u_center_vw,limit_v1,limit_vw")
    for alpha in grid(args.alpha):
        q = float(args.n**alpha)
        for beta in grid(args.beta):
            w = float(args.n**beta)
            cs = community_star_quantities(args.n, args.k, w, q)
            lim = community_star_center_limit(float(alpha), float(beta), args.k)
            print(
                f"{alpha:.3f},{beta:.3f},{cs.center_v1:.6f},{cs.center_vw:.6f},"
                f"{lim.center_v1:.6f},{lim.center_vw:.6f}"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
