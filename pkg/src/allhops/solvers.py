"""Fast all-hops solvers built on hitting-set sample hierarchies.

Three entry points, all returning values that must match the Bellman-Ford
baselines exactly (with high probability over the sample plan's seed; at
small n the level-size schedules clamp to all of V and the outputs are
deterministic):

* single_pair_allhops  - shrinking hierarchy, windowed self-convolutions
  of hop-indexed matrix sequences plus doubling prefix extensions.
* single_source_allhops - growing hierarchy; per level either repeated
  pinned-target single-pair solves or the stacked exact-hop-power scheme
  combined through one rectangular min-plus product.
* all_pairs_allhops   - geometric rounds extending every pair's sequence
  with per-sample scalar min-plus convolutions plus a stagnation candidate.

Internally everything runs on raw float64 stacks; sequences enter the
shared convolution kernels through the MatrixSeq wrappers so a non-default
strategy (e.g. the polynomial kernel) can be routed through the same code.
"""

from __future__ import annotations

import math

import numpy as np

from .baselines import AllHopsTable
from .graph import Graph, detect_negative_cycle, hop1_matrix, weight_matrix
from .matrices import MatrixSeq
from .minplus import matseq_convolution, mp_array
from .sampling import SamplePlan, growing_hierarchy, round_sample, shrinking_hierarchy
from .values import INF


class NegativeCycleError(ValueError):
    """The input graph violates the no-negative-cycle precondition."""


def _require_no_neg_cycle(g: Graph) -> None:
    if detect_negative_cycle(g):
        raise NegativeCycleError("graph has a negative cycle")


def _conv(a3, aoff, b3, boff, verts_a, verts_mid, verts_b, strategy):
    """Matrix-sequence min-plus convolution on raw stacks, routed through
    the strategy-selectable kernel.  Returns (data3, offset)."""
    A = MatrixSeq(aoff, tuple(verts_a), tuple(verts_mid), a3)
    B = MatrixSeq(boff, tuple(verts_mid), tuple(verts_b), b3)
    out = matseq_convolution(A, B, strategy=strategy)
    return out.data, out.offset


# ---------------------------------------------------------------------------
# single pair


def _sp_level_tables(g: Graph, k: int, plan: SamplePlan, strategy: str = "naive"):
    """Shrinking-hierarchy ladder: returns (levels, tables) where
    tables[r][j] = d_{<=j}(S_r, S_r) for j = 0..ceil(n^(r/k)).

    Level 0 holds hops 0..1 (identity and adjacency-with-zero-diagonal).
    Each later level doubles windowed sequences of the previous level's
    matrices and extends its own prefix by convolution, always taking
    entrywise minima with the best previously known values.
    """
    n = g.n
    hier = shrinking_hierarchy(n, k, plan)
    levels = hier.levels
    hops_cap = [min(math.ceil(n ** (r / k)), n) if n > 1 else 1 for r in range(k + 1)]

    ident = np.full((n, n), INF)
    np.fill_diagonal(ident, 0.0)
    table = np.stack([ident, hop1_matrix(g)])
    tables = [table]

    for r in range(1, k + 1):
        prev_verts = levels[r - 1]
        cur_verts = levels[r]
        prev = tables[r - 1]  # (H+1, nP, nP)
        H = prev.shape[0] - 1
        Nr = hops_cap[r]
        half_lo, half_hi = H // 2, (H + 1) // 2
        L = max(0, Nr.bit_length() - 1)  # floor(log2(Nr))

        # Known exact prefix over S_{r-1}; extend once by self-convolution
        # when the first window pokes past it (only happens for H == 1).
        known = prev
        if 1 + half_hi > H:
            boot, boff = _conv(
                prev, 0, prev, 0, prev_verts, prev_verts, prev_verts, strategy
            )
            need = 1 + half_hi
            known = np.concatenate([prev, boot[H + 1 - boff : need + 1 - boff]])

        def window(lo: int, hi: int, src: np.ndarray, src_off: int) -> tuple[np.ndarray, int]:
            """Materialize d_{<=j} for j in [max(lo,0), hi] from src, seeding
            with known values wherever they exist."""
            lo = max(lo, 0)
            out = np.full((hi - lo + 1, len(prev_verts), len(prev_verts)), INF)
            s_lo, s_hi = max(lo, src_off), min(hi, src_off + src.shape[0] - 1)
            if s_lo <= s_hi:
                out[s_lo - lo : s_hi - lo + 1] = src[s_lo - src_off : s_hi - src_off + 1]
            k_hi = min(hi, known.shape[0] - 1)
            if k_hi >= lo:
                np.minimum(
                    out[: k_hi - lo + 1], known[lo : k_hi + 1], out=out[: k_hi - lo + 1]
                )
            return out, lo

        d_win, d_off = window(1 - half_lo, 1 + half_hi, known, 0)
        windows = {0: (d_win, d_off)}
        for i in range(1, L + 1):
            conv, coff = _conv(
                d_win, d_off, d_win, d_off, prev_verts, prev_verts, prev_verts, strategy
            )
            d_win, d_off = window((1 << i) - half_lo, (1 << i) + half_hi, conv, coff)
            windows[i] = (d_win, d_off)

        # Prefix extension: rows S_r, cols S_{r-1}, doubling the known range.
        rowsel = np.searchsorted(prev_verts, cur_verts)
        P = np.full((Nr + 1, len(cur_verts), len(prev_verts)), INF)
        base = min(known.shape[0] - 1, Nr)
        P[: base + 1] = known[: base + 1][:, rowsel, :]
        known_hi = base
        for i in range(L + 1):
            target = min(1 << (i + 1), Nr)
            if target <= known_hi:
                continue
            w_data, w_off = windows[i]
            s_lo, s_hi = 1 << i, (1 << i) + half_hi
            sub = w_data[s_lo - w_off : s_hi - w_off + 1]
            conv, coff = _conv(
                P[: (1 << i) + 1], 0, sub, s_lo, cur_verts, prev_verts, prev_verts, strategy
            )
            lo = known_hi + 1
            np.minimum(
                P[lo : target + 1], conv[lo - coff : target - coff + 1], out=P[lo : target + 1]
            )
            np.minimum.accumulate(P[known_hi : target + 1], axis=0, out=P[known_hi : target + 1])
            known_hi = target

        colsel = np.searchsorted(prev_verts, cur_verts)
        tables.append(P[:, :, colsel])

    return levels, tables


def single_pair_allhops(
    g: Graph, s: int, t: int, k: int, plan: SamplePlan, strategy: str = "naive"
) -> np.ndarray:
    """d_{<=h}(s, t) for h = 1..n-1 (empty for n == 1)."""
    n = g.n
    if not (0 <= s < n and 0 <= t < n):
        raise ValueError("endpoint out of range")
    if k < 1:
        raise ValueError("level count must be >= 1")
    _require_no_neg_cycle(g)
    levels, tables = _sp_level_tables(g, k, plan.with_pins({s, t}), strategy)
    final_verts, final = levels[-1], tables[-1]
    si = int(np.searchsorted(final_verts, s))
    ti = int(np.searchsorted(final_verts, t))
    seq = final[:, si, ti]  # hops 0..ceil(n^(k/k)) >= n-1
    return seq[1:n].copy()


# ---------------------------------------------------------------------------
# single source


def _exact_hop_stack(g: Graph, rows: np.ndarray, H1: int) -> np.ndarray:
    """A[h] = d_h(rows, V) for h = 1..H1 via repeated-squaring powers of W
    and doubling products against the stacked block."""
    n = g.n
    w = weight_matrix(g)
    stack = np.full((H1 + 1, len(rows), n), INF)
    stack[1] = w[rows, :]
    cur = 1
    pow_w = w
    while cur < H1:
        take = min(cur, H1 - cur)
        block = mp_array(stack[1 : take + 1].reshape(take * len(rows), n), pow_w)
        stack[cur + 1 : cur + take + 1] = block.reshape(take, len(rows), n)
        cur += take
        if cur < H1:
            pow_w = mp_array(pow_w, pow_w)
    return stack


def single_source_allhops(
    g: Graph, s: int, k: int, plan: SamplePlan, split: int | None = None
) -> AllHopsTable:
    """d_{<=h}(s, v) for h = 1..n-1 and all v, via the growing hierarchy.

    Levels r <= split run the pinned-target single-pair solver for every
    vertex of S_r (one shared hierarchy build per level: with identical
    plans the per-target solves compute identical tables, so the rows are
    read from a single build).  Levels r > split run the stacked
    exact-hop-power scheme and combine with the previous level through a
    rectangular min-plus product.
    """
    n = g.n
    if not (0 <= s < n):
        raise ValueError("source out of range")
    if k < 1:
        raise ValueError("level count must be >= 1")
    if split is None:
        split = math.ceil(k / 2)
    if not (0 <= split <= k):
        raise ValueError("split must lie in [0, k]")
    _require_no_neg_cycle(g)

    plan = plan.with_pins({s})
    hier = growing_hierarchy(n, k, plan)
    levels = hier.levels
    HH = max(1, n - 1)

    cur = None  # (HH+1, |S_r|): d_{<=h}(s, S_r)
    # Levels below `split` are computed by the self-contained first
    # algorithm and never read again, so the loop starts at r = split.
    for r in range(split, k + 1):
        verts = levels[r]
        if r <= split:
            inner_plan = plan.with_pins(verts.tolist())
            sp_levels, sp_tables = _sp_level_tables(g, k, inner_plan)
            fv, ft = sp_levels[-1], sp_tables[-1]
            si = int(np.searchsorted(fv, s))
            pos = np.searchsorted(fv, verts)
            seq = ft[:, si, pos]  # (N_k+1, |S_r|)
            cur = np.full((HH + 1, len(verts)), INF)
            hi = min(seq.shape[0] - 1, HH)
            cur[: hi + 1] = seq[: hi + 1]
            if hi < HH:
                cur[hi + 1 :] = seq[hi]
        else:
            prev_verts = levels[r - 1]
            H1 = min(math.ceil(n ** (1 - (r - 1) / k)), n)
            stack = _exact_hop_stack(g, prev_verts, H1)
            out = np.full((HH + 1, len(verts)), INF)
            # base: exact-hop row of s (s is in every level) plus hop 0
            spos_prev = int(np.searchsorted(prev_verts, s))
            spos_cur = np.searchsorted(verts, s)
            out[0, spos_cur] = 0.0
            lim = min(H1, HH)
            out[1 : lim + 1] = stack[1 : lim + 1][:, spos_prev, :][:, verts]
            # combine: d_{<=j}(s, S_{r-1}) * d_{h'}(S_{r-1}, S_r)
            for hp in range(1, H1 + 1):
                cand = mp_array(cur, stack[hp][:, verts])  # (HH+1, |S_r|)
                if hp <= HH:
                    np.minimum(out[hp:], cand[: HH + 1 - hp], out=out[hp:])
            np.minimum.accumulate(out, axis=0, out=out)
            cur = out
    return AllHopsTable((s,), HH, cur[:, None, :], None)


# ---------------------------------------------------------------------------
# all pairs


def all_pairs_allhops(g: Graph, plan: SamplePlan) -> AllHopsTable:
    """d_{<=h}(u, v) for all pairs and h = 1..n-1.

    Round k extends every pair's sequence from length K_{k-1} to
    K_k = ceil((3/2)^k): for each sampled x the scalar min-plus convolution
    of the stored (u, x) and (x, v) sequences contributes candidates, the
    stagnation value d_{<=K_{k-1}}(u, v) closes the short-path case.  Once
    two consecutive hop slices are identical the table has stabilized and
    the remaining hops are copies (the one-step recurrence is a function
    of the previous slice alone).
    """
    n = g.n
    _require_no_neg_cycle(g)
    HH = max(1, n - 1)
    le = np.full((HH + 1, n, n), INF)
    np.fill_diagonal(le[0], 0.0)
    le[1] = hop1_matrix(g)
    rng = np.random.default_rng(plan.seed)
    k_round = 1
    K_prev = 1
    while K_prev < n - 1:
        K_new = min(math.ceil(1.5**k_round), n - 1)
        k_round += 1
        if K_new <= K_prev:
            continue
        if np.array_equal(le[K_prev], le[K_prev - 1]):
            le[K_prev + 1 :] = le[K_prev]
            break
        size = min(n, math.ceil(plan.C * n * math.log(n) / K_prev))
        sample = round_sample(rng, n, size, plan.pinned)
        for x in sample:
            fwd = le[1 : K_prev + 1, :, x].copy()  # (K_prev, n)
            bwd = le[1 : K_prev + 1, x, :].copy()
            for h in range(K_prev + 1, K_new + 1):
                for hp in range(h - K_prev, K_prev + 1):
                    np.minimum(
                        le[h], fwd[hp - 1][:, None] + bwd[h - hp - 1][None, :], out=le[h]
                    )
        for h in range(K_prev + 1, K_new + 1):
            np.minimum(le[h], le[h - 1], out=le[h])
        K_prev = K_new
    return AllHopsTable(tuple(range(n)), HH, le, None)
