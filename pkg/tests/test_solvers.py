import numpy as np
import pytest

from allhops import (
    INF,
    NegativeCycleError,
    SamplePlan,
    all_pairs_allhops,
    apah_brute,
    gen_random_graph,
    graph_from_edges,
    single_pair_allhops,
    single_source_allhops,
)
from allhops.solvers import _sp_level_tables

PLAN = SamplePlan(C=4.0, seed=1)


def _random_case(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 51))
    m = min(int(rng.integers(n, 3 * n + 1)), n * (n - 1))
    g = gen_random_graph(n, m, 5, seed, require_no_neg_cycle=True)
    return g, apah_brute(g, with_exact=False), rng


# ---------------------------------------------------------------------------
# single pair


def test_single_pair_f1(f1):
    assert single_pair_allhops(f1, 0, 2, 1, PLAN).tolist() == [10, 2]


def test_single_pair_f4(f4):
    assert single_pair_allhops(f4, 0, 3, 2, SamplePlan(seed=3)).tolist() == [INF, 1, 1]


def test_single_pair_same_endpoints(f1):
    assert single_pair_allhops(f1, 1, 1, 2, PLAN).tolist() == [0, 0]


def test_single_pair_single_vertex():
    g = graph_from_edges(1, [])
    assert single_pair_allhops(g, 0, 0, 2, PLAN).size == 0


def test_single_pair_rejects_negative_cycle(f3):
    with pytest.raises(NegativeCycleError):
        single_pair_allhops(f3, 0, 1, 1, PLAN)


def test_single_pair_matches_oracle():
    for seed in range(25):
        g, brute, rng = _random_case(seed)
        s, t = (int(x) for x in rng.integers(0, g.n, size=2))
        k = 1 + seed % 3
        got = single_pair_allhops(g, s, t, k, SamplePlan(seed=seed))
        assert np.array_equal(got, brute.le[1:, s, t]), (seed, k)


def test_single_pair_polynomial_strategy_route(f4):
    naive = single_pair_allhops(f4, 0, 3, 2, PLAN, strategy="naive")
    poly = single_pair_allhops(f4, 0, 3, 2, PLAN, strategy="polynomial")
    assert np.array_equal(naive, poly)


def test_single_pair_deterministic():
    g, _, _ = _random_case(7)
    a = single_pair_allhops(g, 0, 1, 3, SamplePlan(seed=42))
    b = single_pair_allhops(g, 0, 1, 3, SamplePlan(seed=42))
    assert np.array_equal(a, b)


def test_level_tables_consistent_under_restriction():
    g, brute, _ = _random_case(3)
    plan = SamplePlan(seed=5).with_pins({0, 1})
    levels, tables = _sp_level_tables(g, 3, plan)
    for r in range(len(levels) - 1):
        cur, nxt = levels[r], levels[r + 1]
        pos = np.searchsorted(cur, nxt)
        prev_restricted = tables[r][:, pos][:, :, pos]
        overlap = min(tables[r].shape[0], tables[r + 1].shape[0])
        assert np.array_equal(prev_restricted[:overlap], tables[r + 1][:overlap])
    # every level's table is exact (hops past n-1 hold stabilized values)
    for verts, tab in zip(levels, tables):
        overlap = min(tab.shape[0], brute.le.shape[0])
        want = brute.le[:overlap][:, verts][:, :, verts]
        assert np.array_equal(tab[:overlap], want)
        assert np.array_equal(tab[overlap:], np.broadcast_to(want[-1], tab[overlap:].shape))


# ---------------------------------------------------------------------------
# single source


def test_single_source_f1(f1):
    t = single_source_allhops(f1, 0, 1, PLAN)
    assert t.le[1, 0].tolist() == [0, 1, 10]
    assert t.le[2, 0].tolist() == [0, 1, 2]


def test_single_source_f4(f4):
    t = single_source_allhops(f4, 0, 2, PLAN)
    assert t.le[2, 0, 3] == 1
    assert t.le[1, 0, 3] == INF


def test_single_source_split_settings_match_oracle():
    for seed in range(10):
        g, brute, rng = _random_case(seed + 50)
        s = int(rng.integers(0, g.n))
        for k in (2, 3):
            for split in (None, 0, k):
                got = single_source_allhops(g, s, k, SamplePlan(seed=seed), split=split)
                assert np.array_equal(got.le[:, 0, :], brute.le[:, s, :]), (seed, k, split)


def test_single_source_k1_and_validation(f1, f3):
    t = single_source_allhops(f1, 0, 1, PLAN)
    brute = apah_brute(f1, with_exact=False)
    assert np.array_equal(t.le[:, 0, :], brute.le[:, 0, :])
    with pytest.raises(NegativeCycleError):
        single_source_allhops(f3, 0, 2, PLAN)
    with pytest.raises(ValueError):
        single_source_allhops(f1, 0, 2, PLAN, split=5)


def test_single_source_output_monotone():
    g, _, _ = _random_case(17)
    t = single_source_allhops(g, 2, 3, SamplePlan(seed=2))
    assert (t.le[1:] <= t.le[:-1]).all()


# ---------------------------------------------------------------------------
# all pairs


def test_all_pairs_f1(f1):
    got = all_pairs_allhops(f1, PLAN)
    want = apah_brute(f1, with_exact=False)
    assert np.array_equal(got.le, want.le)


def test_all_pairs_no_edges():
    g = graph_from_edges(4, [])
    t = all_pairs_allhops(g, PLAN)
    for h in range(1, 4):
        off = t.le[h][~np.eye(4, dtype=bool)]
        assert np.isinf(off).all()


def test_all_pairs_matches_oracle():
    for seed in range(20):
        g, brute, _ = _random_case(seed + 100)
        got = all_pairs_allhops(g, SamplePlan(C=8.0, seed=seed))
        assert np.array_equal(got.le, brute.le), seed


def test_all_pairs_deterministic_and_rejects_cycle(f3):
    g, _, _ = _random_case(23)
    a = all_pairs_allhops(g, SamplePlan(seed=9))
    b = all_pairs_allhops(g, SamplePlan(seed=9))
    assert np.array_equal(a.le, b.le)
    with pytest.raises(NegativeCycleError):
        all_pairs_allhops(f3, PLAN)
