"""Shared fixtures: the hand-checked worked example and random instances.

The expected numbers in `fix_values` were re-derived independently with exact
rational arithmetic before the library existed; tests treat them as frozen
ground truth.
"""

from __future__ import annotations

import random

import pytest

from railyard import (
    Attribute,
    BlockStats,
    Layout,
    NON_OVERLAPPING,
    OVERLAPPING,
    Query,
    Schema,
    SubBlock,
    TimeRange,
    Workload,
)


@pytest.fixture
def fix_schema() -> Schema:
    return Schema([
        Attribute(0, "a1", 4),
        Attribute(1, "a2", 8),
        Attribute(2, "a3", 4),
    ])


@pytest.fixture
def fix_stats() -> BlockStats:
    return BlockStats(c_e=10, c_n=2, time=TimeRange(0, 100))


@pytest.fixture
def fix_workload() -> Workload:
    return Workload([
        Query(id=1, attrs=[0, 1], time=TimeRange(10, 20), weight=2.0),
        Query(id=2, attrs=[2], time=TimeRange(30, 40), weight=1.0),
    ])


@pytest.fixture
def fix_layout_two() -> Layout:
    """{{a1,a2},{a3}}"""
    return Layout([SubBlock([0, 1]), SubBlock([2])], NON_OVERLAPPING)


@pytest.fixture
def fix_layout_single() -> Layout:
    return Layout([SubBlock([0, 1, 2])], NON_OVERLAPPING)


@pytest.fixture
def fix_layout_singletons() -> Layout:
    return Layout([SubBlock([0]), SubBlock([1]), SubBlock([2])], NON_OVERLAPPING)


@pytest.fixture
def fix_layout_overlap() -> Layout:
    """{{a1,a2},{a2,a3}}"""
    return Layout([SubBlock([0, 1]), SubBlock([1, 2])], OVERLAPPING)


@pytest.fixture
def fix_values() -> dict:
    return {
        "s_block": 344,
        "s_a1": 224,
        "s_a2": 264,
        "s_a3": 224,
        "s_a1a2": 304,
        "s_a2a3": 304,
        "s_a1a3": 264,
        "s_empty": 184,
        "h_two": 184 / 344,
        "h_three": 368 / 344,
        "h_overlap": 264 / 344,
        "io_two": 832.0,
        "io_single": 1032.0,
        "io_per_attr": 1200.0,
        "io_two_q2_disjoint": 608.0,
        "max_parts_bound": 1 + 1 / (184 / 344),  # ~2.8696
        "merge_cost": (1032 - 832) / (184 / 344),  # ~373.913
    }


def random_instance(rng: random.Random, n_max: int, q_max: int,
                    size_choices=(1, 2, 4, 8, 16, 32, 64),
                    time_disjoint_chance: float = 0.0):
    """Small random instance for oracle and property tests."""
    n = rng.randint(1, n_max)
    schema = Schema([Attribute(i, f"a{i}", rng.choice(size_choices)) for i in range(n)])
    stats = BlockStats(c_e=rng.randint(1, 50), c_n=rng.randint(1, 20),
                       time=TimeRange(0, 100))
    queries = []
    for qi in range(rng.randint(1, q_max)):
        k = rng.randint(1, n)
        if rng.random() < time_disjoint_chance:
            t = TimeRange(200, 300)
        else:
            t = TimeRange(rng.randint(0, 90), rng.randint(90, 100))
        queries.append(Query(id=qi, attrs=rng.sample(range(n), k), time=t,
                             weight=rng.choice([0.25, 0.5, 1.0, 2.0, 3.0])))
    return schema, stats, Workload(queries)


def random_nov_layout(rng: random.Random, schema: Schema) -> Layout:
    """Random set partition of the schema's attributes."""
    n = len(schema)
    k = rng.randint(1, n)
    slots: list[set[int]] = [set() for _ in range(k)]
    for a in range(n):
        slots[rng.randrange(k)].add(a)
    return Layout([SubBlock(s) for s in slots if s], NON_OVERLAPPING)
