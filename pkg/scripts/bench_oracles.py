#!/usr/bin/env python3
"""Build/query cost report for the five distance-oracle kinds.

Prints preprocessing time, stored cell counts with their n^2 log^2 n ratio,
mean query latency, and the per-query addition counter where tracked; spot
checks a batch of queries against the Bellman-Ford baseline.
"""

import argparse
import time

import numpy as np

from allhops import (
    SamplePlan,
    apah_brute,
    build_oracle_bf,
    build_oracle_bounded,
    build_oracle_mn,
    build_oracle_mpp,
    build_oracle_powers,
    gen_random_graph,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=120)
    ap.add_argument("--m", type=int, default=360)
    ap.add_argument("--M", type=int, default=5)
    ap.add_argument("--seed", type=int, default=29)
    ap.add_argument("--C", type=float, default=4.0)
    ap.add_argument("--queries", type=int, default=500)
    args = ap.parse_args()

    g = gen_random_graph(args.n, args.m, args.M, args.seed, require_no_neg_cycle=True)
    brute = apah_brute(g, with_exact=False)
    plan = SamplePlan(args.C, args.seed)
    builders = {
        "powers": lambda: build_oracle_powers(g),
        "bf": lambda: build_oracle_bf(g),
        "mn": lambda: build_oracle_mn(g, plan),
        "mpp": lambda: build_oracle_mpp(g, plan),
        "bounded": lambda: build_oracle_bounded(g, plan),
    }
    rng = np.random.default_rng(args.seed)
    triples = [
        (int(u), int(v), int(h))
        for u, v, h in zip(
            rng.integers(0, g.n, args.queries),
            rng.integers(0, g.n, args.queries),
            rng.integers(1, g.n, args.queries),
        )
    ]
    norm = args.n * args.n * np.log2(args.n) ** 2
    print(f"graph: n={g.n} m={g.m} M={args.M} seed={args.seed} C={args.C}")
    print(f"{'kind':>8} {'build_s':>8} {'cells':>10} {'cells/n2log2':>12} {'query_us':>9} {'adds/q':>8} {'match':>6}")
    for kind, build in builders.items():
        t0 = time.time()
        oracle = build()
        build_s = time.time() - t0
        cells = oracle.storage_cells() if hasattr(oracle, "storage_cells") else oracle.le.size
        if hasattr(oracle, "counters"):
            oracle.counters.reset()
        t0 = time.time()
        match = all(oracle.query(u, v, h) == brute.le[h, u, v] for u, v, h in triples)
        query_us = (time.time() - t0) / len(triples) * 1e6
        adds = getattr(oracle, "counters", None)
        adds_per = adds.adds // len(triples) if adds else 0
        print(
            f"{kind:>8} {build_s:>8.2f} {cells:>10} {cells / norm:>12.2f} "
            f"{query_us:>9.0f} {adds_per:>8} {str(match):>6}"
        )
        if not match:
            return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
