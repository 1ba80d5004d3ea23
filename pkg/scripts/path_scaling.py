#!/usr/bin/env python3
"""Convergence of path separation probabilities to their scaling limits.

For pairs at distance d = floor(2*delta*sqrt(n)) with killing rate q = 1/d^2,
prints the exact finite-n values against the limits 1 - 3/(2e) (bulk) and
1 - 3/(2e) - exp(-alpha/delta)/2 (midpoint at alpha*sqrt(n) from an end),
plus the random-walk sandwich at the bulk pair.

    python3 scripts/path_scaling.py --delta 0.3
"""

import argparse
import math
import sys

from lepart import path_asymptotic_limit, path_correlation, path_rw_bounds


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--delta", type=float, default=0.3)
    ap.add_argument("--sizes", default="1e4,1e5,1e6,1e7")
    args = ap.parse_args()
    delta = args.delta
    bulk = path_asymptotic_limit("bulk").value
    boundary = path_asymptotic_limit("boundary", alpha=delta, delta=delta).value
    print(f"# delta={delta}; bulk limit={bulk:.6f}, boundary(alpha=delta) limit={boundary:.6f}")
    print("n,d,q,u_bulk,bulk_err,u_boundary,boundary_err,rw_lower,rw_upper")
    for size in args.sizes.split(","):
        n = int(float(size))
        d = int(2 * delta * math.sqrt(n))
        q = 1.0 / d**2
        x_bulk = (n - d) // 2
        u_bulk = path_correlation(n, x_bulk, x_bulk + d, q)
        u_bdry = path_correlation(n, 1, 1 + d, q)
        b = path_rw_bounds(d, q, max(1, d * d // 8))
        lower = "" if b.lower is None else f"{b.lower:.6f}"
        print(
            f"{n},{d},{q:.3g},{u_bulk:.6f},{abs(u_bulk-bulk):.2e},"
            f"{u_bdry:.6f},{abs(u_bdry-boundary):.2e},{lower},{b.upper:.6f}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
