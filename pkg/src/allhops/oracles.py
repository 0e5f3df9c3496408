"""Preprocess/query all-hops distance oracles.

Five kinds share one query contract (d_{<=h}(u,v) for 1 <= h <= n-1):

* powers / bf - full 3-D tables, O(1) lookup; built either by iterated
  min-plus powers or by Bellman-Ford from every vertex; bit-identical.
* mn      - log-many levels of shrinking samples, each with forward and
  backward Bellman-Ford tables out to a doubling hop budget; queries scan
  levels and split points.
* mpp     - geometric (3/2) levels of nested samples whose tables are
  assembled by block min-plus products; two-sided query scan.
* bounded - geometric levels built either by stacked exact-hop powers (small
  hop budgets) or by per-sample sequence convolutions (large budgets), with
  a configurable crossover; query scan as for mn.

Oracles are immutable after build; `query` only touches the work counters.
A versioned binary snapshot (magic AHDO1) makes build and query separable
processes; int64 cells with the maximum value reserved for +inf.
"""

from __future__ import annotations

import io
import math
import struct
import threading
from dataclasses import dataclass, field

import numpy as np

from .baselines import _bf_multi
from .graph import Graph, hop1_matrix, reverse, weight_matrix
from .minplus import mp_array
from .sampling import SamplePlan, round_sample
from .solvers import _exact_hop_stack, _require_no_neg_cycle
from .values import INF, from_int64, to_int64

MAGIC = b"AHDO1"
KINDS = ("powers", "bf", "mn", "mpp", "bounded")


class MemoryBudgetError(MemoryError):
    """Estimated table size exceeds the configured cap."""


@dataclass
class WorkCounters:
    """Contention-safe work tallies; queries may run concurrently."""

    adds: int = 0
    relaxations: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def add_adds(self, count: int) -> None:
        with self._lock:
            self.adds += count

    def add_relaxations(self, count: int) -> None:
        with self._lock:
            self.relaxations += count

    def reset(self) -> None:
        with self._lock:
            self.adds = 0
            self.relaxations = 0


def _check_query(n: int, u: int, v: int, h: int) -> None:
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError("query vertex out of range")
    if not (1 <= h <= n - 1):
        raise ValueError(f"hop budget {h} outside [1, {n - 1}]")


def _ident_rows(verts: np.ndarray, n: int) -> np.ndarray:
    out = np.full((len(verts), n), INF)
    out[np.arange(len(verts)), verts] = 0.0
    return out


# ---------------------------------------------------------------------------
# full-table oracles (powers / bf)


@dataclass
class FullTableOracle:
    kind: str
    n: int
    H: int
    le: np.ndarray  # (H+1, n, n)
    counters: WorkCounters = field(default_factory=WorkCounters)

    def query(self, u: int, v: int, h: int):
        _check_query(self.n, u, v, h)
        return self.le[min(h, self.H), u, v]


def _check_mem(cells: int, mem_cap_bytes: int) -> None:
    if cells * 8 > mem_cap_bytes:
        raise MemoryBudgetError(
            f"full table needs {cells * 8} bytes, cap is {mem_cap_bytes}"
        )


def build_oracle_powers(
    g: Graph, H: int | None = None, mem_cap_bytes: int = 4 << 30
) -> FullTableOracle:
    """Running minima of the min-plus powers W, W^2, ..., W^H."""
    n = g.n
    if H is None:
        H = max(1, n - 1)
    _check_mem((H + 1) * n * n, mem_cap_bytes)
    le = np.full((H + 1, n, n), INF)
    np.fill_diagonal(le[0], 0.0)
    power = None
    w = weight_matrix(g)
    for h in range(1, H + 1):
        power = w if h == 1 else mp_array(power, w)
        le[h] = np.minimum(le[h - 1], power)
    return FullTableOracle("powers", n, H, le)


def build_oracle_bf(
    g: Graph, H: int | None = None, mem_cap_bytes: int = 4 << 30
) -> FullTableOracle:
    """Bellman-Ford from every vertex; must be bit-identical to powers."""
    n = g.n
    if H is None:
        H = max(1, n - 1)
    _check_mem((H + 1) * n * n, mem_cap_bytes)
    table = _bf_multi(g, range(n), H, with_exact=False)
    return FullTableOracle("bf", n, H, table.le)


# ---------------------------------------------------------------------------
# mn oracle: doubling hop budgets, per-level BF in both directions


@dataclass
class MnLevel:
    budget: int
    sample: np.ndarray
    fwd: np.ndarray  # (budget+1, |S|, n): d_{<=h}(s, v)
    bwd: np.ndarray  # (budget+1, |S|, n): d_{<=h}(v, s) laid out as rev rows


@dataclass
class MnOracle:
    n: int
    seed: int
    C: float
    levels: list[MnLevel]
    counters: WorkCounters = field(default_factory=WorkCounters)

    def storage_cells(self) -> int:
        return sum(lv.fwd.size + lv.bwd.size for lv in self.levels)

    def query(self, u: int, v: int, h: int):
        _check_query(self.n, u, v, h)
        if u == v:
            return 0.0
        top = h.bit_length() - 1  # 2^top <= h < 2^(top+1)
        best = INF
        for lv in self.levels[: top + 1]:
            if lv.sample.size == 0:
                continue
            hmax = min(h, lv.budget)
            hp = np.arange(1, hmax + 1)
            to_s = lv.bwd[hp, :, u]  # d_{<=h'}(u, s)
            from_s = lv.fwd[np.minimum(h - hp, lv.budget), :, v]
            self.counters.add_adds(to_s.size)
            cand = (to_s + from_s).min()
            if cand < best:
                best = cand
        return best


def build_oracle_mn(g: Graph, plan: SamplePlan) -> MnOracle:
    _require_no_neg_cycle(g)
    n = g.n
    rng = np.random.default_rng(plan.seed)
    rev = reverse(g)
    oracle = MnOracle(n, plan.seed, plan.C, [])
    top = max(0, n.bit_length() - 1)  # floor(log2 n)
    for i in range(top + 1):
        size = min(n, math.ceil(plan.C * n * math.log(n) / 2**i)) if n > 1 else 0
        sample = round_sample(rng, n, size, plan.pinned)
        budget = min(2 ** (i + 1), max(1, n - 1))
        if sample.size:
            fwd = _bf_multi(g, sample, budget, with_exact=False).le
            bwd = _bf_multi(rev, sample, budget, with_exact=False).le
            oracle.counters.add_relaxations(2 * g.m * budget * sample.size)
        else:
            fwd = np.full((budget + 1, 0, n), INF)
            bwd = fwd.copy()
        oracle.levels.append(MnLevel(budget, sample, fwd, bwd))
    return oracle


# ---------------------------------------------------------------------------
# mpp oracle: nested geometric levels built by block min-plus products


def _geometric_ladder(n: int) -> list[int]:
    """K_0 = 1, then ceil((3/2)^j) capped at n-1, strictly increasing."""
    hh = max(1, n - 1)
    ks = [1]
    j = 1
    while ks[-1] < hh:
        ks.append(min(math.ceil(1.5**j), hh))
        j += 1
    return ks


def _nested_samples(n: int, plan: SamplePlan, ks: list[int], denom) -> list[np.ndarray]:
    """S_0 = V, then nested draws S_j <= S_{j-1} of scheduled sizes."""
    rng = np.random.default_rng(plan.seed)
    samples = [np.arange(n, dtype=np.int64)]
    for j in range(1, len(ks)):
        size = min(n, math.ceil(plan.C * n * math.log(n) / denom(j))) if n > 1 else 0
        samples.append(round_sample(rng, n, size, plan.pinned, within=samples[-1]))
    return samples


def _mpp_tables(g: Graph, samples: list[np.ndarray], ks: list[int]) -> list[np.ndarray]:
    """tables[j][h] = d_{<=h}(S_j, V) for h = 0..K_j, by block products.

    The block matrix B over row index (s, h) and column index (s', h') has
    finite entries d_{<=h-h'}(s, s') only on the band h - h' <= K_prev, so
    the product D = B * C is evaluated per target hop with the all-infinity
    columns dropped.
    """
    n = g.n
    base = np.stack([_ident_rows(np.arange(n), n), hop1_matrix(g)])
    tables = [base]
    for j in range(1, len(ks)):
        k_prev, k_new = ks[j - 1], ks[j]
        prev = tables[j - 1]
        prev_verts, verts = samples[j - 1], samples[j]
        sel = np.searchsorted(prev_verts, verts)
        cur = np.full((k_new + 1, len(verts), n), INF)
        cur[: k_prev + 1] = prev[: k_prev + 1][:, sel, :]
        if k_new > k_prev and len(verts):
            sp = len(prev_verts)
            prev_cols = prev[:, :, prev_verts]  # d_{<=g}(S_{j-1}, S_{j-1})
            for h in range(k_prev + 1, k_new + 1):
                hp = np.arange(max(1, h - k_prev), k_prev + 1)
                # B-row block for hop h: (|S_j|, band * sp)
                b2 = (
                    prev_cols[h - hp][:, sel, :].swapaxes(0, 1).reshape(len(verts), -1)
                )
                c2 = prev[hp].reshape(len(hp) * sp, n)
                d2 = mp_array(b2, c2)
                cur[h] = np.minimum(prev[k_prev][sel], d2)
        tables.append(cur)
    return tables


@dataclass
class MppOracle:
    n: int
    seed: int
    C: float
    ks: list[int]
    samples: list[np.ndarray]
    fwd: list[np.ndarray]  # fwd[j][h][si, v] = d_{<=h}(s, v)
    bwd: list[np.ndarray]  # bwd[j][h][si, u] = d_{<=h}(u, s)
    counters: WorkCounters = field(default_factory=WorkCounters)

    def storage_cells(self) -> int:
        return sum(a.size for a in self.fwd) + sum(a.size for a in self.bwd)

    def query(self, u: int, v: int, h: int):
        _check_query(self.n, u, v, h)
        if u == v:
            return 0.0
        jstar = next(j for j, k in enumerate(self.ks) if h <= k)
        best = INF
        for j in range(jstar + 1):
            if self.samples[j].size == 0:
                continue
            kj = self.ks[j]
            hmax = min(h, kj)
            hp = np.arange(1, hmax + 1)
            to_s = self.bwd[j][np.minimum(h - hp, kj), :, u]
            from_s = self.fwd[j][hp, :, v]
            self.counters.add_adds(to_s.size)
            cand = (to_s + from_s).min()
            if cand < best:
                best = cand
        return best


def build_oracle_mpp(g: Graph, plan: SamplePlan) -> MppOracle:
    _require_no_neg_cycle(g)
    n = g.n
    ks = _geometric_ladder(n)
    samples = _nested_samples(n, plan, ks, lambda j: 1.5**j)
    fwd = _mpp_tables(g, samples, ks)
    bwd = _mpp_tables(reverse(g), samples, ks)
    return MppOracle(n, plan.seed, plan.C, ks, samples, fwd, bwd)


# ---------------------------------------------------------------------------
# bounded-weight oracle: stacked powers below the crossover, sequence
# convolutions above it


def default_crossover(n: int, M: int) -> int:
    return math.ceil(n ** (2 / 3) / max(1, M) ** (1 / 3))


@dataclass
class BoundedOracle:
    n: int
    seed: int
    C: float
    kstar: int
    ks: list[int]
    samples: list[np.ndarray]
    fwd: list[np.ndarray]
    bwd: list[np.ndarray]
    counters: WorkCounters = field(default_factory=WorkCounters)

    def storage_cells(self) -> int:
        return sum(a.size for a in self.fwd) + sum(a.size for a in self.bwd)

    def query(self, u: int, v: int, h: int):
        _check_query(self.n, u, v, h)
        if u == v:
            return 0.0
        jstar = next(j for j, k in enumerate(self.ks) if h <= k)
        best = INF
        for j in range(jstar + 1):
            if self.samples[j].size == 0:
                continue
            kj = self.ks[j]
            hmax = min(h, kj)
            hp = np.arange(1, hmax + 1)
            to_s = self.bwd[j][np.minimum(h - hp, kj), :, u]
            from_s = self.fwd[j][hp, :, v]
            self.counters.add_adds(to_s.size)
            cand = (to_s + from_s).min()
            if cand < best:
                best = cand
        return best


def _extend_by_convolution(
    prev: np.ndarray, prev_verts: np.ndarray, verts: np.ndarray, k_prev: int, k_new: int
) -> np.ndarray:
    """Per-sample scalar min-plus convolutions, vectorized over targets:
    extends d_{<=h}(S_new, V) from hop K_prev to K_new with the stagnation
    candidate folded in by a running minimum."""
    n = prev.shape[2]
    sel = np.searchsorted(prev_verts, verts)
    cur = np.full((k_new + 1, len(verts), n), INF)
    cur[: k_prev + 1] = prev[: k_prev + 1][:, sel, :]
    for px, x in enumerate(prev_verts):
        to_x = prev[1 : k_prev + 1][:, sel, x]  # (K_prev, |S_new|)
        from_x = prev[1 : k_prev + 1][:, px, :]  # (K_prev, n)
        for h in range(k_prev + 1, k_new + 1):
            for hp in range(h - k_prev, k_prev + 1):
                np.minimum(
                    cur[h], to_x[hp - 1][:, None] + from_x[h - hp - 1][None, :], out=cur[h]
                )
    for h in range(k_prev + 1, k_new + 1):
        np.minimum(cur[h], cur[h - 1], out=cur[h])
    return cur


def _bounded_tables(
    g: Graph, samples: list[np.ndarray], ks: list[int], kstar: int
) -> list[np.ndarray]:
    tables = []
    for j, k in enumerate(ks):
        verts = samples[j]
        if j == 0 or k <= kstar:
            # stacked exact-hop powers, then running minima
            if len(verts):
                stack = _exact_hop_stack(g, verts, k)
                stack[0] = _ident_rows(verts, g.n)
                np.minimum.accumulate(stack, axis=0, out=stack)
            else:
                stack = np.full((k + 1, 0, g.n), INF)
            tables.append(stack)
        else:
            tables.append(
                _extend_by_convolution(tables[j - 1], samples[j - 1], verts, ks[j - 1], k)
            )
    return tables


def build_oracle_bounded(
    g: Graph, plan: SamplePlan, kstar: int | None = None
) -> BoundedOracle:
    if g.declared_M is None:
        raise ValueError("bounded oracle needs declared_M on the graph")
    _require_no_neg_cycle(g)
    n = g.n
    ks = _geometric_ladder(n)
    samples = _nested_samples(n, plan, ks, lambda j: min(math.ceil(1.5**j), max(1, n - 1)))
    if kstar is None:
        kstar = default_crossover(n, g.declared_M)
    fwd = _bounded_tables(g, samples, ks, kstar)
    bwd = _bounded_tables(reverse(g), samples, ks, kstar)
    return BoundedOracle(n, plan.seed, plan.C, kstar, ks, samples, fwd, bwd)


# ---------------------------------------------------------------------------
# snapshots


def _pack_arrays(buf: io.BytesIO, arrays) -> None:
    buf.write(struct.pack("<I", len(arrays)))
    for a in arrays:
        a = np.ascontiguousarray(a)
        buf.write(struct.pack("<I", a.ndim))
        buf.write(struct.pack(f"<{a.ndim}Q", *a.shape))
        buf.write(to_int64(a.astype(np.float64) if a.dtype != np.float64 else a).tobytes())


def _unpack_arrays(buf: io.BytesIO):
    (count,) = struct.unpack("<I", buf.read(4))
    out = []
    for _ in range(count):
        (ndim,) = struct.unpack("<I", buf.read(4))
        shape = struct.unpack(f"<{ndim}Q", buf.read(8 * ndim))
        size = int(np.prod(shape)) if ndim else 1
        raw = np.frombuffer(buf.read(8 * size), dtype="<i8").reshape(shape)
        out.append(from_int64(raw))
    return out


def save_oracle(oracle) -> bytes:
    buf = io.BytesIO()
    buf.write(MAGIC)
    kind = oracle.kind if isinstance(oracle, FullTableOracle) else (
        "mn" if isinstance(oracle, MnOracle)
        else "mpp" if isinstance(oracle, MppOracle)
        else "bounded"
    )
    buf.write(struct.pack("<B", KINDS.index(kind)))
    seed = getattr(oracle, "seed", 0)
    C = getattr(oracle, "C", 1.0)
    buf.write(struct.pack("<IQd", oracle.n, seed, C))
    if isinstance(oracle, FullTableOracle):
        buf.write(struct.pack("<q", 0))
        buf.write(struct.pack("<I", 1))
        buf.write(struct.pack("<I", oracle.H))
        buf.write(struct.pack("<I", oracle.n))
        buf.write(np.arange(oracle.n, dtype="<i8").tobytes())
        _pack_arrays(buf, [oracle.le])
    elif isinstance(oracle, MnOracle):
        buf.write(struct.pack("<q", 0))
        buf.write(struct.pack("<I", len(oracle.levels)))
        for lv in oracle.levels:
            buf.write(struct.pack("<I", lv.budget))
            buf.write(struct.pack("<I", lv.sample.size))
            buf.write(lv.sample.astype("<i8").tobytes())
            _pack_arrays(buf, [lv.fwd, lv.bwd])
    else:
        buf.write(struct.pack("<q", getattr(oracle, "kstar", 0)))
        buf.write(struct.pack("<I", len(oracle.ks)))
        for j, k in enumerate(oracle.ks):
            buf.write(struct.pack("<I", k))
            buf.write(struct.pack("<I", oracle.samples[j].size))
            buf.write(oracle.samples[j].astype("<i8").tobytes())
            _pack_arrays(buf, [oracle.fwd[j], oracle.bwd[j]])
    return buf.getvalue()


def load_oracle(data: bytes):
    buf = io.BytesIO(data)
    if buf.read(5) != MAGIC:
        raise ValueError("not an AHDO1 oracle snapshot")
    (kind_idx,) = struct.unpack("<B", buf.read(1))
    kind = KINDS[kind_idx]
    n, seed, C = struct.unpack("<IQd", buf.read(20))
    (extra,) = struct.unpack("<q", buf.read(8))
    (level_count,) = struct.unpack("<I", buf.read(4))
    levels = []
    for _ in range(level_count):
        (budget,) = struct.unpack("<I", buf.read(4))
        (slen,) = struct.unpack("<I", buf.read(4))
        sample = np.frombuffer(buf.read(8 * slen), dtype="<i8").astype(np.int64)
        arrays = _unpack_arrays(buf)
        levels.append((budget, sample, arrays))
    if kind in ("powers", "bf"):
        budget, _, arrays = levels[0]
        return FullTableOracle(kind, n, budget, arrays[0])
    if kind == "mn":
        return MnOracle(
            n, seed, C, [MnLevel(b, s, a[0], a[1]) for b, s, a in levels]
        )
    ks = [b for b, _, _ in levels]
    samples = [s for _, s, _ in levels]
    fwd = [a[0] for _, _, a in levels]
    bwd = [a[1] for _, _, a in levels]
    if kind == "mpp":
        return MppOracle(n, seed, C, ks, samples, fwd, bwd)
    return BoundedOracle(n, seed, C, int(extra), ks, samples, fwd, bwd)
