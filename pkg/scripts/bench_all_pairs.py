#!/usr/bin/env python3
"""Timing sweep for the all-pairs solver against the Bellman-Ford baseline.

Each row generates a negative-cycle-free random graph, runs both algorithms,
verifies exact agreement, and reports wall-clock times.  The final row
mirrors the performance-smoke configuration (n=256, m=1024, M=8).
"""

import argparse
import time

import numpy as np

from allhops import SamplePlan, all_pairs_allhops, apah_brute, gen_random_graph


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=99)
    ap.add_argument("--C", type=float, default=4.0)
    ap.add_argument(
        "--sizes",
        default="32:128,64:256,128:512,256:1024",
        help="comma-separated n:m pairs",
    )
    ap.add_argument("--M", type=int, default=8)
    args = ap.parse_args()

    print(f"{'n':>5} {'m':>6} {'M':>4} {'solver_s':>9} {'brute_s':>8} {'match':>6}")
    for chunk in args.sizes.split(","):
        n, m = (int(x) for x in chunk.split(":"))
        g = gen_random_graph(n, m, args.M, args.seed, require_no_neg_cycle=True)
        t0 = time.time()
        got = all_pairs_allhops(g, SamplePlan(args.C, args.seed))
        solver_s = time.time() - t0
        t0 = time.time()
        brute = apah_brute(g, with_exact=False)
        brute_s = time.time() - t0
        match = np.array_equal(got.le, brute.le)
        print(f"{n:>5} {m:>6} {args.M:>4} {solver_s:>9.2f} {brute_s:>8.2f} {str(match):>6}")
        if not match:
            return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
