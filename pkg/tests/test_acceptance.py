"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Every comparison is exact integer equality (tolerance 0).  All randomness is
seeded, and oversampling constants are chosen so the level-size schedules
clamp to whole vertex sets at these scales, making the solver and oracle
outputs deterministic (see the suite constants below).

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines
and timings.
"""

import time

import numpy as np
import pytest

from allhops import (
    INF,
    MatrixSeq,
    SamplePlan,
    all_pairs_allhops,
    apah_brute,
    bellman_ford_allhops,
    build_oracle_bf,
    build_oracle_bounded,
    build_oracle_mn,
    build_oracle_mpp,
    build_oracle_powers,
    build_tree_gadget,
    build_triangle_gadget,
    decide_triangle,
    decode_convolution,
    decode_mpp,
    gen_random_graph,
    indexed_combination_bruteforce,
    matseq_convolution,
    minplus_product_bruteforce,
    reduce_convolution_to_hops,
    reduce_mpp_to_exact_hops,
    single_pair_allhops,
    single_source_allhops,
    triangle_bruteforce,
)

# Fixed once for criterion 8; never raised.
RESOURCE_CONSTANT = 16

# Solver suites: C=4 clamps every hitting-set level to all of V for
# n <= 60 at k <= 3; the all-pairs rounds need C=8 for the same guarantee.
SOLVER_C = 4.0
ALL_PAIRS_C = 8.0
# Oracle suites: C=8 clamps every level at n <= 30.  At n=120 the mpp and
# bounded constructions use C=4 to keep the block products desk-sized; the
# residual sampling-failure probability there is ~e**-20 per query and the
# seeds below are frozen.
ORACLE_C_SMALL = 8.0
ORACLE_C_LARGE = 4.0


def _report(name: str, elapsed: float, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {name}: {status} ({elapsed:.1f}s){detail}")
    assert ok, name


def _random_no_neg_cycle(rng: np.random.Generator, M: int):
    n = int(rng.integers(5, 61))
    m = min(int(rng.integers(n, 3 * n + 1)), n * (n - 1))
    seed = int(rng.integers(0, 2**32))
    return gen_random_graph(n, m, M, seed, require_no_neg_cycle=True)


def test_criterion_1_solver_equivalence():
    t0 = time.time()
    ok = True
    for cfg, M in enumerate((1, 5, 100)):
        rng = np.random.default_rng(1000 + cfg)
        for i in range(100):
            g = _random_no_neg_cycle(rng, M)
            brute = apah_brute(g, with_exact=False)
            s, t = (int(x) for x in rng.integers(0, g.n, size=2))
            seed = int(rng.integers(0, 2**32))

            k_sp = 1 + i % 3
            sp = single_pair_allhops(g, s, t, k_sp, SamplePlan(SOLVER_C, seed))
            ok &= np.array_equal(sp, brute.le[1:, s, t])

            k_ss = 2 + i % 2
            ss = single_source_allhops(g, s, k_ss, SamplePlan(SOLVER_C, seed))
            ok &= np.array_equal(ss.le[:, 0, :], brute.le[:, s, :])

            ap = all_pairs_allhops(g, SamplePlan(ALL_PAIRS_C, seed))
            ok &= np.array_equal(ap.le, brute.le)
            if not ok:
                _report("1 solver-equivalence", time.time() - t0, False,
                        f" [M={M} i={i} n={g.n}]")
    _report("1 solver-equivalence", time.time() - t0, ok)


def _oracle_set(g, C, seed):
    plan = SamplePlan(C, seed)
    return {
        "powers": build_oracle_powers(g),
        "bf": build_oracle_bf(g),
        "mn": build_oracle_mn(g, SamplePlan(ORACLE_C_SMALL, seed)),
        "mpp": build_oracle_mpp(g, plan),
        "bounded": build_oracle_bounded(g, plan),
    }


def test_criterion_2_and_8_oracles_and_counters():
    t0 = time.time()
    ok = True
    built = []
    for n, seed in ((2, 20), (5, 21), (9, 22), (17, 23), (30, 24)):
        m = min(3 * n, n * (n - 1))
        g = gen_random_graph(n, m, 5, seed, require_no_neg_cycle=True)
        brute = apah_brute(g, with_exact=False)
        oracles = _oracle_set(g, ORACLE_C_SMALL, seed)
        built.append((g, oracles))
        for u in range(n):
            for v in range(n):
                for h in range(1, n):
                    want = brute.le[h, u, v]
                    for name, oracle in oracles.items():
                        if oracle.query(u, v, h) != want:
                            ok = False
    g = gen_random_graph(120, 360, 5, 29, require_no_neg_cycle=True)
    brute = apah_brute(g, with_exact=False)
    oracles = _oracle_set(g, ORACLE_C_LARGE, 29)
    built.append((g, oracles))
    rng = np.random.default_rng(30)
    for _ in range(1000):
        u, v = (int(x) for x in rng.integers(0, g.n, size=2))
        h = int(rng.integers(1, g.n))
        want = brute.le[h, u, v]
        for name, oracle in oracles.items():
            if oracle.query(u, v, h) != want:
                ok = False
    _report("2 oracle-equivalence", time.time() - t0, ok)

    # criterion 8: resource counters with the fixed constant
    t0 = time.time()
    ok = True
    for g, oracles in built:
        if g.n < 2:
            continue
        log2 = np.log2(g.n) ** 2
        mn = oracles["mn"]
        ok &= mn.storage_cells() <= RESOURCE_CONSTANT * g.n * g.n * log2
        ok &= oracles["mpp"].storage_cells() <= RESOURCE_CONSTANT * g.n * g.n * log2
        ok &= mn.counters.relaxations <= RESOURCE_CONSTANT * g.m * g.n * log2
        worst = 0
        rng = np.random.default_rng(g.n)
        queries = [(int(a), int(b), int(h)) for a, b, h in zip(
            rng.integers(0, g.n, 50), rng.integers(0, g.n, 50), rng.integers(1, g.n, 50)
        )] + [(0, g.n - 1, g.n - 1)]
        for u, v, h in queries:
            mn.counters.reset()
            mn.query(u, v, h)
            worst = max(worst, mn.counters.adds)
        ok &= worst <= RESOURCE_CONSTANT * g.n * log2
    _report("8 resource-counters", time.time() - t0, ok)


def test_criterion_3_kernel_equivalence():
    t0 = time.time()
    rng = np.random.default_rng(3000)
    ok = True
    for _ in range(200):
        n = int(rng.integers(1, 17))
        inner = int(rng.integers(1, 17))
        la, lb = (int(x) for x in rng.integers(1, 17, size=2))
        M = int(rng.integers(0, 9))

        def draw(length, r, c):
            vals = rng.integers(-M, M + 1, size=(length, r, c)).astype(float)
            vals[rng.random((length, r, c)) < 0.2] = INF
            return MatrixSeq(int(rng.integers(0, 4)), tuple(range(r)), tuple(range(c)), vals)

        a = draw(la, n, inner)
        b = draw(lb, inner, n)
        ok &= matseq_convolution(a, b, "polynomial", M) == matseq_convolution(a, b)
    _report("3 kernel-equivalence", time.time() - t0, ok)


def test_criterion_4_table_self_convolution():
    t0 = time.time()
    rng = np.random.default_rng(4000)
    ok = True
    for _ in range(50):
        n = int(rng.integers(2, 31))
        m = min(int(rng.integers(n, 3 * n + 1)), n * (n - 1))
        k = int(rng.integers(1, 9))
        g = gen_random_graph(n, m, 5, int(rng.integers(0, 2**32)), require_no_neg_cycle=True)
        table = apah_brute(g, 2 * k, with_exact=False)
        d = MatrixSeq(0, tuple(range(n)), tuple(range(n)), table.le[: k + 1])
        ok &= np.array_equal(matseq_convolution(d, d).data, table.le[: 2 * k + 1])
    _report("4 table-self-convolution", time.time() - t0, ok)


def test_criterion_5_tree_gadget_closed_forms():
    t0 = time.time()
    ok = True
    for depth in range(1, 7):
        gadget = build_tree_gadget(depth)
        hops = (1 << depth) - 1
        v = gadget.vertex("v")
        for i in range(1, (1 << depth) + 1):
            row = bellman_ford_allhops(gadget.graph, gadget.vertex(f"u{i}"), hops)
            ok &= row.ex[hops][v] == i + (1 << depth) - 2
            ok &= all(np.isinf(row.ex[h][v]) for h in range(hops))
            if depth == 2:
                ok &= row.le[hops][v] == 2 + i
    _report("5 tree-gadget", time.time() - t0, ok)


def test_criterion_6_triangle_gadget():
    t0 = time.time()
    ok = True
    for trial in range(50):
        rng = np.random.default_rng(6000 + trial)
        n = int(rng.integers(1, 11))

        def edges(p):
            return [(a, b) for a in range(n) for b in range(n) if rng.random() < p]

        ij, jk, ki = edges(0.25), edges(0.25), edges(0.25)
        gadget = build_triangle_gadget(n, ij, jk, ki)
        table = apah_brute(gadget.graph, n + 4, with_exact=False)
        ok &= decide_triangle(gadget, table) == triangle_bruteforce(n, ij, jk, ki)
    _report("6 triangle-gadget", time.time() - t0, ok)


def test_criterion_7_reduction_decoders():
    t0 = time.time()
    ok = True
    for trial in range(50):
        rng = np.random.default_rng(7000 + trial)
        n = int(rng.choice([2, 4, 8]))
        x = int(rng.choice([x for x in (2, 4, 8) if x <= n]))
        A = rng.integers(1, x + 1, size=(n, n // x))
        B = rng.integers(1, x + 1, size=(n // x, n))
        gadget = reduce_mpp_to_exact_hops(A, B, x)
        table = apah_brute(gadget.graph, n - 1 + 2 * x)
        ok &= np.array_equal(decode_mpp(gadget, table), minplus_product_bruteforce(A, B))
    for trial in range(50):
        rng = np.random.default_rng(7500 + trial)
        n = int(rng.integers(1, 9))
        A = rng.integers(-8, 13, size=(n, n))
        B = rng.integers(-8, 13, size=(n, n))
        gadget = reduce_convolution_to_hops(A, B)
        table = apah_brute(gadget.graph, 2 * n + 2)
        ok &= np.array_equal(
            decode_convolution(gadget, table), indexed_combination_bruteforce(A, B)
        )
    _report("7 reduction-decoders", time.time() - t0, ok)


def test_criterion_9_performance_smoke():
    # Non-gating timing report; the gate is completion plus exact equality.
    g = gen_random_graph(256, 1024, 8, 99, require_no_neg_cycle=True)
    t0 = time.time()
    got = all_pairs_allhops(g, SamplePlan(SOLVER_C, 99))
    elapsed = time.time() - t0
    brute = apah_brute(g, with_exact=False)
    ok = np.array_equal(got.le, brute.le)
    _report(
        "9 performance-smoke",
        elapsed,
        ok,
        f" [n=256 m=1024 M=8 all-pairs {elapsed:.1f}s; report target 60s on 4 cores]",
    )
