"""Seeded random workload and block generation.

Defaults: 10 attributes with byte sizes drawn Zipf(z=0.5) from
{4, 1, 8, 2, 16, 32, 64}; 5 query kinds whose lengths are Normal(mu=3,
sigma=2) rounded and clamped to [1, n]; query frequencies Zipf(z=0.5) over
the query index, normalized to sum 1.

Randomness comes from a hand-rolled splitmix64 stream so generated instances
are bit-stable across platforms and library versions. Every generated query
overlaps the block's time range; `inject_time_disjoint` shifts some out of
range when the time indicator itself is under test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import Attribute, BlockStats, Query, Schema, TimeRange, Workload

TIME_HORIZON = 1000  # block time range is [0, TIME_HORIZON]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """Deterministic 64-bit generator (splitmix64), splittable via `spawn`."""

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        span = hi - lo + 1
        return lo + int(self.random() * span) % span

    def spawn(self, *keys: int) -> "SplitMix64":
        """Child stream keyed by integers; deterministic and collision-mixed."""
        state = self._state
        for k in keys:
            mixer = SplitMix64(state ^ ((k + 0x632BE59BD9B4E019) & _MASK64))
            state = mixer.next_u64()
        return SplitMix64(state)


def mix_seed(base: int, *keys: int) -> int:
    """Derive a child seed from a base seed and index keys."""
    return SplitMix64(base).spawn(*keys).next_u64()


@dataclass(frozen=True)
class WorkloadSpec:
    """Generator parameters; defaults match the standard benchmark setup."""

    n_attributes: int = 10
    attr_size_choices: tuple[int, ...] = (4, 1, 8, 2, 16, 32, 64)
    attr_size_zipf_z: float = 0.5
    query_len_mean: float = 3.0
    query_len_stddev: float = 2.0
    n_query_kinds: int = 5
    query_freq_zipf_z: float = 0.5
    alpha: float = 1.0
    block_c_e: int = 1000
    block_c_n: int = 100
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_attributes < 1:
            raise ValueError("n_attributes must be >= 1")
        if self.n_query_kinds < 1:
            raise ValueError("n_query_kinds must be >= 1")
        if self.query_len_stddev < 0:
            raise ValueError("query_len_stddev must be >= 0")
        if not self.attr_size_choices:
            raise ValueError("attr_size_choices must be non-empty")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")


def zipf_sample(rng: SplitMix64, n: int, z: float) -> int:
    """Rank in [1..n] with probability proportional to 1 / rank^z."""
    if n < 1:
        raise ValueError("n must be >= 1")
    weights = [1.0 / (i ** z) for i in range(1, n + 1)]
    target = rng.random() * sum(weights)
    acc = 0.0
    for i, w in enumerate(weights, start=1):
        acc += w
        if target < acc:
            return i
    return n


def _standard_normal(rng: SplitMix64) -> float:
    # Box-Muller; u1 nudged away from 0 to keep the log finite
    u1 = rng.random()
    u2 = rng.random()
    if u1 <= 0.0:
        u1 = 2.0 ** -53
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def query_length_sample(rng: SplitMix64, spec: WorkloadSpec) -> int:
    """Normal draw rounded to the nearest integer (ties up), clamped to
    [1, n_attributes]."""
    x = spec.query_len_mean + spec.query_len_stddev * _standard_normal(rng)
    k = int(math.floor(x + 0.5))
    return max(1, min(spec.n_attributes, k))


def _sample_distinct(rng: SplitMix64, n: int, k: int) -> list[int]:
    """k distinct integers from range(n), uniform, via partial Fisher-Yates."""
    pool = list(range(n))
    for i in range(k):
        j = rng.randint(i, n - 1)
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:k]


def generate(spec: WorkloadSpec) -> tuple[Schema, Workload, BlockStats]:
    """Build one (schema, workload, block) instance, a pure function of spec.

    Attribute sizes are i.i.d. Zipf ranks into the size choice list. Each
    query draws a length, then that many distinct attributes uniformly.
    Weights follow Zipf over the query index and are normalized to sum 1.
    Query time ranges are random sub-intervals of the block's range, so every
    query is time-relevant to the block.
    """
    rng = SplitMix64(spec.seed)
    attrs = []
    for i in range(spec.n_attributes):
        pick = zipf_sample(rng, len(spec.attr_size_choices), spec.attr_size_zipf_z)
        attrs.append(Attribute(id=i, name=f"a{i}", size=spec.attr_size_choices[pick - 1]))
    schema = Schema(attrs)

    raw_weights = [1.0 / ((i + 1) ** spec.query_freq_zipf_z)
                   for i in range(spec.n_query_kinds)]
    total_w = sum(raw_weights)

    queries = []
    for i in range(spec.n_query_kinds):
        length = query_length_sample(rng, spec)
        chosen = _sample_distinct(rng, spec.n_attributes, length)
        t0 = rng.randint(0, TIME_HORIZON - 1)
        t1 = rng.randint(t0, TIME_HORIZON)
        queries.append(Query(
            id=i, attrs=chosen, time=TimeRange(t0, t1), weight=raw_weights[i] / total_w))
    workload = Workload(queries)
    stats = BlockStats(c_e=spec.block_c_e, c_n=spec.block_c_n,
                       time=TimeRange(0, TIME_HORIZON))
    return schema, workload, stats


def inject_time_disjoint(workload: Workload, block_time: TimeRange,
                         count: int) -> Workload:
    """Shift the last `count` queries entirely past the block's time range,
    so they stop contributing to its I/O."""
    if count < 0 or count > len(workload.queries):
        raise ValueError(f"count must be in [0, {len(workload.queries)}]")
    shifted = []
    for i, q in enumerate(workload.queries):
        if i >= len(workload.queries) - count:
            span = q.time.t_end - q.time.t_start
            start = block_time.t_end + 1
            shifted.append(Query(id=q.id, attrs=q.attrs,
                                 time=TimeRange(start, start + span), weight=q.weight))
        else:
            shifted.append(q)
    return Workload(shifted)
