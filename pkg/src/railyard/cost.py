"""Analytical cost model: sub-block sizes, storage overhead, and query I/O.

All sizes are exact integers; overheads and I/O totals are float64. A
sub-block holding attribute set S costs

    c_e * (per_edge_structure + sum of s(a) for a in S) + c_n * per_neighbor_list

bytes, because every sub-block replicates the full block structure. Queries
read sub-blocks according to the layout flavor: under the non-overlapping
flavor a query reads every sub-block sharing one of its attributes; under the
overlapping flavor it reads the greedy marginal-gain cover.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .model import (
    DEFAULT_CONSTANTS,
    NON_OVERLAPPING,
    OVERLAPPING,
    BlockStats,
    CostConstants,
    Layout,
    Query,
    Schema,
    SubBlock,
    Workload,
    attrs_to_mask,
    time_overlaps,
    validate_layout,
)

H_TOL = 1e-9  # comparison tolerance on overheads


@dataclass(frozen=True)
class CostReport:
    """Total and per-query I/O of a layout plus its storage overhead."""

    query_io: float
    overhead: float
    per_query_io: dict[int, float]


@dataclass(frozen=True)
class InstanceContext:
    """Numpy marshalling of one (schema, stats, workload) instance.

    Shared by the cost functions and the solvers so the subset-sum table is
    built once. `weights_effective` folds the block/query time-overlap
    indicator into the weights: time-disjoint queries carry weight 0.
    """

    n: int
    sizes: np.ndarray            # int64[n]
    table: np.ndarray            # int64[2^n], subset byte sums
    qmasks: np.ndarray           # int64[nq]
    weights_effective: np.ndarray  # float64[nq]
    query_ids: tuple[int, ...]
    structure: int               # per-sub-block structure bytes
    c_e: int
    s_block: int                 # full block size (all attributes)
    alpha_fraction: float        # structure share of the block, Eq-3 factor

    @staticmethod
    def build(schema: Schema, stats: BlockStats, workload: Workload,
              consts: CostConstants = DEFAULT_CONSTANTS) -> "InstanceContext":
        workload.validate_against(schema)
        n = len(schema)
        if n > 62:
            raise ValueError(f"bitmask cost model supports at most 62 attributes, got {n}")
        sizes = np.array(schema.sizes(), dtype=np.int64)
        table = kernels.attr_sum_table(sizes)
        qmasks = np.array([attrs_to_mask(q.attrs) for q in workload.queries], dtype=np.int64)
        weff = np.array(
            [q.weight if time_overlaps(q.time, stats.time) else 0.0 for q in workload.queries],
            dtype=np.float64,
        )
        structure = consts.per_edge_structure * stats.c_e + consts.per_neighbor_list * stats.c_n
        s_block = structure + stats.c_e * int(table[-1])
        return InstanceContext(
            n=n,
            sizes=sizes,
            table=table,
            qmasks=qmasks,
            weights_effective=weff,
            query_ids=tuple(q.id for q in workload.queries),
            structure=structure,
            c_e=stats.c_e,
            s_block=s_block,
            alpha_fraction=structure / s_block,
        )

    def block_arrays(self, layout: Layout) -> tuple[np.ndarray, np.ndarray]:
        masks = np.array([attrs_to_mask(b.attrs) for b in layout.sub_blocks], dtype=np.int64)
        sizes = np.array([self.structure + self.c_e * int(self.table[m]) for m in masks],
                         dtype=np.float64)
        return masks, sizes


def sub_block_size(stats: BlockStats, attrs: Iterable[int], schema: Schema,
                   consts: CostConstants = DEFAULT_CONSTANTS) -> int:
    """Byte size of one sub-block carrying `attrs`. An empty set prices the
    bare structure replica."""
    payload = sum(schema.size_of(a) for a in attrs)
    return (stats.c_e * (consts.per_edge_structure + payload)
            + stats.c_n * consts.per_neighbor_list)


def block_size(stats: BlockStats, schema: Schema,
               consts: CostConstants = DEFAULT_CONSTANTS) -> int:
    """Size of the unpartitioned block (all attributes in one sub-block)."""
    return sub_block_size(stats, schema.all_ids, schema, consts)


def storage_overhead_nov(layout: Layout, stats: BlockStats, schema: Schema,
                         consts: CostConstants = DEFAULT_CONSTANTS) -> float:
    """Overhead of a non-overlapping layout: only the replicated structure
    costs extra, so it depends on the partition count alone."""
    if layout.flavor != NON_OVERLAPPING:
        raise ValueError("storage_overhead_nov only applies to non-overlapping layouts")
    problems = validate_layout(layout, schema)
    if problems:
        raise ValueError("invalid layout: " + "; ".join(problems))
    s_b = block_size(stats, schema, consts)
    attr_bytes = stats.c_e * schema.total_attr_size
    return (len(layout) - 1) * (1.0 - attr_bytes / s_b)


def storage_overhead(layout: Layout, stats: BlockStats, schema: Schema,
                     consts: CostConstants = DEFAULT_CONSTANTS) -> float:
    """General overhead: total sub-block bytes over the unpartitioned size,
    minus one. Valid for both flavors."""
    total = sum(sub_block_size(stats, b.attrs, schema, consts) for b in layout.sub_blocks)
    return total / block_size(stats, schema, consts) - 1.0


def covering_sub_blocks_nov(layout: Layout, query: Query) -> tuple[SubBlock, ...]:
    """Sub-blocks a query reads under the non-overlapping rule: exactly those
    whose attributes intersect the query's."""
    if layout.flavor != NON_OVERLAPPING:
        raise ValueError("covering_sub_blocks_nov only applies to non-overlapping layouts")
    return tuple(b for b in layout.sub_blocks if b.attrs & query.attrs)


def covering_sub_blocks_ov(layout: Layout, query: Query, stats: BlockStats,
                           schema: Schema,
                           consts: CostConstants = DEFAULT_CONSTANTS) -> list[SubBlock]:
    """Sub-blocks a query reads under the overlapping rule, in selection order.

    Greedy: repeatedly take the sub-block with the highest payload-per-byte
    gain over the query attributes still uncovered; ties go to the earliest
    sub-block in the layout. Every selection covers at least one new query
    attribute, so at most |query.attrs| sub-blocks are returned.
    """
    if not query.attrs <= layout.attr_union():
        raise ValueError(f"layout does not cover query {query.id} attributes")
    selected: list[int] = []
    covered: set[int] = set()
    sizes = [sub_block_size(stats, b.attrs, schema, consts) for b in layout.sub_blocks]
    while not query.attrs <= covered:
        best = -1
        best_gain = 0.0
        for i, b in enumerate(layout.sub_blocks):
            if i in selected:
                continue
            fresh = b.attrs & query.attrs - covered
            if not fresh:
                continue
            gain = stats.c_e * sum(schema.size_of(a) for a in fresh) / sizes[i]
            if best < 0 or gain > best_gain:
                best = i
                best_gain = gain
        selected.append(best)
        covered |= layout.sub_blocks[best].attrs
    return [layout.sub_blocks[i] for i in selected]


def query_io(layout: Layout, stats: BlockStats, workload: Workload, schema: Schema,
             consts: CostConstants = DEFAULT_CONSTANTS) -> CostReport:
    """Total workload I/O of a layout.

    Each query contributes weight times the bytes of the sub-blocks it reads,
    and only if its time range intersects the block's. The covering rule
    follows the layout flavor.
    """
    problems = validate_layout(layout, schema)
    if problems:
        raise ValueError("invalid layout: " + "; ".join(problems))
    ctx = InstanceContext.build(schema, stats, workload, consts)
    masks, sizes = ctx.block_arrays(layout)
    per = np.empty(len(workload.queries), dtype=np.float64)
    if layout.flavor == OVERLAPPING:
        total = kernels.eval_io_greedy_cover(
            masks, sizes, ctx.c_e, ctx.table, ctx.qmasks, ctx.weights_effective, per)
    else:
        total = kernels.eval_io_intersect(masks, sizes, ctx.qmasks, ctx.weights_effective, per)
    return CostReport(
        query_io=float(total),
        overhead=storage_overhead(layout, stats, schema, consts),
        per_query_io={qid: float(v) for qid, v in zip(ctx.query_ids, per)},
    )
