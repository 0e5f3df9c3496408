"""Seeded vertex sampling: plans, nested hierarchies, and level-size
schedules for the hierarchical solvers and the distance oracles.

All draws come from a PCG64 generator seeded by the plan, so every
structure built from the same (n, plan) is identical across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SamplePlan:
    C: float = 4.0
    seed: int = 0
    pinned: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.C < 1:
            raise ValueError("oversampling constant C must be >= 1")
        object.__setattr__(self, "pinned", frozenset(int(v) for v in self.pinned))

    def with_pins(self, extra) -> "SamplePlan":
        return SamplePlan(self.C, self.seed, self.pinned | frozenset(int(v) for v in extra))


@dataclass(frozen=True)
class SampleHierarchy:
    direction: str  # "shrinking" | "growing"
    levels: tuple[np.ndarray, ...]  # sorted vertex-index arrays
    plan: SamplePlan


def _check_pins(n: int, plan: SamplePlan) -> np.ndarray:
    pins = np.array(sorted(plan.pinned), dtype=np.int64)
    if pins.size and (pins[0] < 0 or pins[-1] >= n):
        raise ValueError("pinned vertex out of range")
    return pins


def _draw(rng: np.random.Generator, pool: np.ndarray, count: int) -> np.ndarray:
    if count <= 0 or pool.size == 0:
        return np.zeros(0, dtype=np.int64)
    count = min(count, pool.size)
    return pool[rng.choice(pool.size, size=count, replace=False)]


def shrinking_schedule(n: int, k: int, r: int, C: float) -> int:
    """|S_r| = min(n, ceil(C * n^(1-r/k) * ln n)); S_0 is all of V."""
    if r == 0:
        return n
    return min(n, math.ceil(C * n ** (1 - r / k) * math.log(n)) if n > 1 else 1)


def growing_schedule(n: int, k: int, r: int, C: float) -> int:
    """|S_r| = min(n, ceil(C * n^(r/k) * ln n)); S_k is all of V."""
    if r == k:
        return n
    return min(n, math.ceil(C * n ** (r / k) * math.log(n)) if n > 1 else 1)


def shrinking_hierarchy(n: int, k: int, plan: SamplePlan) -> SampleHierarchy:
    """V = S_0 >= S_1 >= ... >= S_k, pinned vertices in every level,
    remainder drawn without replacement from the parent level."""
    pins = _check_pins(n, plan)
    rng = np.random.default_rng(plan.seed)
    levels = [np.arange(n, dtype=np.int64)]
    for r in range(1, k + 1):
        size = max(shrinking_schedule(n, k, r, plan.C), pins.size)
        parent = levels[-1]
        pool = np.setdiff1d(parent, pins)
        drawn = _draw(rng, pool, size - pins.size)
        levels.append(np.sort(np.concatenate([pins, drawn])))
    return SampleHierarchy("shrinking", tuple(levels), plan)


def growing_hierarchy(n: int, k: int, plan: SamplePlan) -> SampleHierarchy:
    """S_0 <= S_1 <= ... <= S_k = V, pinned vertices in every level,
    each level extending the previous with fresh draws."""
    pins = _check_pins(n, plan)
    rng = np.random.default_rng(plan.seed)
    cur = pins.copy()
    levels = []
    for r in range(k + 1):
        size = max(growing_schedule(n, k, r, plan.C), cur.size)
        pool = np.setdiff1d(np.arange(n, dtype=np.int64), cur)
        cur = np.sort(np.concatenate([cur, _draw(rng, pool, size - cur.size)]))
        levels.append(cur.copy())
    return SampleHierarchy("growing", tuple(levels), plan)


def round_sample(
    rng: np.random.Generator, n: int, size: int, pinned=(), within: np.ndarray | None = None
) -> np.ndarray:
    """One sorted sample of `size` vertices (clamped), pinned first;
    `within` restricts the pool (used for nested level draws)."""
    pins = np.array(sorted(set(int(v) for v in pinned)), dtype=np.int64)
    pool = np.arange(n, dtype=np.int64) if within is None else np.asarray(within)
    pool = np.setdiff1d(pool, pins)
    drawn = _draw(rng, pool, max(size, pins.size) - pins.size)
    return np.sort(np.concatenate([pins, drawn]))
