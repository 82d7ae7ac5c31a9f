"""Greedy partitioners and the two baseline layouts.

`greedy_nov` grows the partition count and assigns attributes one at a time
to the slot that keeps the partial query I/O lowest. `greedy_ov` starts from
one sub-block per query kind and merges pairs until the storage budget is
met. Both are deterministic: every tie breaks toward the lowest index.
"""

from __future__ import annotations

import numpy as np

from . import cost
from .model import (
    DEFAULT_CONSTANTS,
    NON_OVERLAPPING,
    OVERLAPPING,
    BlockStats,
    CostConstants,
    Layout,
    OptimizerConfig,
    Schema,
    SubBlock,
    Workload,
    attrs_to_mask,
    mask_to_attrs,
)
from .kernels import active as _k


def greedy_nov(schema: Schema, stats: BlockStats, workload: Workload,
               config: OptimizerConfig,
               consts: CostConstants = DEFAULT_CONSTANTS) -> Layout:
    """Non-overlapping greedy layout.

    Attributes are placed in decreasing access frequency f(a), ids breaking
    ties, because frequent attributes constrain the assignment most. For each
    candidate slot count the partial I/O drives slot choice; slot counts stop
    growing once the overhead of the non-empty slots exceeds alpha (overhead
    is monotone in the partition count). The cheapest feasible assignment
    wins; a single partition is always feasible.
    """
    stats.require_optimizable()
    ctx = cost.InstanceContext.build(schema, stats, workload, consts)
    freq = workload.frequencies(schema)
    order = np.array(sorted(range(ctx.n), key=lambda a: (-freq[a], a)), dtype=np.int64)
    parts, count, _ = _k.assign_attributes(
        order, ctx.table, ctx.qmasks, ctx.weights_effective,
        float(ctx.structure), float(ctx.c_e), ctx.alpha_fraction, config.alpha)
    blocks = [SubBlock(mask_to_attrs(int(m))) for m in parts[:count] if int(m) != 0]
    return Layout(blocks, NON_OVERLAPPING)


def greedy_ov(schema: Schema, stats: BlockStats, workload: Workload,
              config: OptimizerConfig,
              consts: CostConstants = DEFAULT_CONSTANTS) -> Layout:
    """Overlapping greedy layout.

    Starts from the per-query ideal: one sub-block per distinct query
    attribute set, plus one extra sub-block holding any attributes no query
    reads. While the overhead exceeds alpha, merges the sub-block pair with
    the smallest I/O increase per byte of storage reclaimed. Merging always
    reclaims at least one structure replica, so the loop reaches a single
    sub-block (overhead 0) in the worst case.
    """
    stats.require_optimizable()
    if not workload.queries:
        raise ValueError("greedy_ov needs a non-empty workload")
    ctx = cost.InstanceContext.build(schema, stats, workload, consts)
    initial: list[int] = []
    for q in workload.queries:
        m = attrs_to_mask(q.attrs)
        if m not in initial:
            initial.append(m)
    uncovered = (1 << ctx.n) - 1
    for m in initial:
        uncovered &= ~m
    if uncovered:
        initial.append(uncovered)
    masks, count, _ = _k.merge_partitions(
        np.array(initial, dtype=np.int64), ctx.table, ctx.qmasks,
        ctx.weights_effective, float(ctx.structure), float(ctx.c_e),
        float(ctx.s_block), config.alpha)
    blocks = [SubBlock(mask_to_attrs(int(m))) for m in masks[:count]]
    return Layout(blocks, OVERLAPPING)


def single_partition(schema: Schema) -> Layout:
    """Baseline: every attribute in one sub-block (the unpartitioned block)."""
    return Layout([SubBlock(schema.all_ids)], NON_OVERLAPPING)


def partition_per_attribute(schema: Schema) -> Layout:
    """Baseline: one singleton sub-block per attribute. Ignores the storage
    budget, like the single-partition baseline."""
    return Layout([SubBlock([a.id]) for a in schema.attributes], NON_OVERLAPPING)
