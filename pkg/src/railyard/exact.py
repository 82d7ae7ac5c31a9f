"""Exact layout search: guaranteed-optimal partitioners for both flavors.

The non-overlapping solver enumerates set partitions in restricted-growth-
string order, pruning partition counts the overhead budget rules out. The
overlapping solver runs a depth-first branch-and-bound over sub-block masks
in a canonical (strictly decreasing) column order, pricing every query at its
exact minimum-cost cover; its objective therefore matches the free cover
choice of the integer-program formulation rather than the greedy covering
rule used for evaluation. Both solvers honor node and wall-clock budgets and
return their best feasible solution flagged non-optimal on truncation.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import cost
from .model import (
    DEFAULT_CONSTANTS,
    NON_OVERLAPPING,
    OVERLAPPING,
    BlockStats,
    CostConstants,
    Layout,
    LimitExceededError,
    OptimizerConfig,
    Query,
    Schema,
    SubBlock,
    Workload,
    mask_to_attrs,
)
from .kernels import active as _k

_CHUNK = 200_000          # kernel nodes between wall-clock checks
_DP_FLOAT_CAP = 1 << 23   # cap on the branch-and-bound dp table entries


@dataclass(frozen=True)
class ExactSolution:
    """Solver outcome.

    `objective` is the I/O under the solver's own covering rule (intersection
    for non-overlapping, minimum-cost cover for overlapping). `query_io_eval`
    re-prices the returned layout with the production covering rule, so
    heuristic and exact results compare apples-to-apples; for non-overlapping
    layouts the two coincide. `optimal` is False when a budget truncated the
    search.
    """

    layout: Layout
    objective: float
    optimal: bool
    nodes_explored: int
    query_io_eval: float


def _deadline(config: OptimizerConfig) -> float:
    budget = config.limits.time_budget_seconds
    return math.inf if budget is None else time.monotonic() + budget


def _node_cap(config: OptimizerConfig) -> int:
    cap = config.limits.max_nodes
    # at least one node, so a truncated search still returns a feasible layout
    return 2**62 if cap is None else max(1, cap)


def max_partitions(alpha: float, n: int, structure_fraction: float) -> int:
    """Largest partition count whose non-overlapping overhead fits alpha:
    (k - 1) * structure_fraction <= alpha, capped at the attribute count."""
    if structure_fraction <= 0:
        return n
    k = int(math.floor((alpha + cost.H_TOL) / structure_fraction)) + 1
    return max(1, min(n, k))


def solve_exact_nov(schema: Schema, stats: BlockStats, workload: Workload,
                    config: OptimizerConfig,
                    consts: CostConstants = DEFAULT_CONSTANTS) -> ExactSolution:
    """Optimal non-overlapping layout by exhaustive set-partition enumeration.

    Partitions with more parts than the overhead budget allows are never
    generated. Ties keep the first optimum in enumeration order. Raises
    LimitExceededError above the configured attribute cap (Bell numbers grow
    too fast beyond it).
    """
    stats.require_optimizable()
    ctx = cost.InstanceContext.build(schema, stats, workload, consts)
    if ctx.n > config.limits.max_enum_attributes:
        raise LimitExceededError(
            f"set-partition enumeration capped at {config.limits.max_enum_attributes} "
            f"attributes, got {ctx.n}")
    max_parts = max_partitions(config.alpha, ctx.n, ctx.alpha_fraction)

    rgs = np.zeros(ctx.n, dtype=np.int8)
    best_rgs = np.zeros(ctx.n, dtype=np.int8)
    started = 0
    best_io = np.inf
    nodes = 0
    finished = False
    deadline = _deadline(config)
    cap = _node_cap(config)
    while not finished and nodes < cap and (nodes == 0 or time.monotonic() < deadline):
        chunk = min(_CHUNK, cap - nodes)
        done, best_io, finished, started = _k.enum_partitions(
            rgs, started, max_parts, ctx.table, ctx.qmasks, ctx.weights_effective,
            float(ctx.structure), float(ctx.c_e), chunk, best_io, best_rgs)
        nodes += int(done)

    parts: dict[int, set[int]] = {}
    for a in range(ctx.n):
        parts.setdefault(int(best_rgs[a]), set()).add(a)
    blocks = [SubBlock(parts[p]) for p in sorted(parts)]
    layout = Layout(blocks, NON_OVERLAPPING)
    return ExactSolution(
        layout=layout,
        objective=float(best_io),
        optimal=bool(finished),
        nodes_explored=nodes,
        query_io_eval=float(best_io),
    )


def _reverse_mask(mask: int, n: int) -> int:
    out = 0
    for i in range(n):
        if mask & (1 << i):
            out |= 1 << (n - 1 - i)
    return out


def solve_exact_ov(schema: Schema, stats: BlockStats, workload: Workload,
                   config: OptimizerConfig,
                   consts: CostConstants = DEFAULT_CONSTANTS) -> ExactSolution:
    """Optimal overlapping layout by branch-and-bound over sub-block masks.

    Complete over every layout the overhead budget admits: the column count
    is bounded by the budget in bytes, not by the attribute count, because
    replicating attributes across more sub-blocks than attributes can be
    strictly better. Masks are explored in a canonical strictly decreasing
    order (the first attribute rides the first column), killing the column
    permutation symmetry. Queries are priced at their exact minimum-cost
    cover, maintained incrementally per depth.
    """
    stats.require_optimizable()
    ctx = cost.InstanceContext.build(schema, stats, workload, consts)
    n = ctx.n
    if n > config.limits.max_search_attributes:
        raise LimitExceededError(
            f"overlapping search capped at {config.limits.max_search_attributes} "
            f"attributes, got {n}")

    # work in bit-reversed masks so "first attribute" owns the top bit and
    # numeric mask order equals the canonical column order
    rev_sizes = np.array(list(reversed(schema.sizes())), dtype=np.int64)
    table = _k.attr_sum_table(rev_sizes)
    qmasks = np.array([_reverse_mask(int(m), n) for m in ctx.qmasks], dtype=np.int64)
    nq = len(qmasks)

    budget_bytes = ctx.s_block * (1.0 + config.alpha) + ctx.s_block * cost.H_TOL
    min_col = ctx.structure + ctx.c_e * int(min(schema.sizes()))
    dmax = min((1 << n) - 1, int(budget_bytes // min_col))
    dmax = max(dmax, 1)
    depth_capped = False
    if (dmax + 1) * max(nq, 1) * (1 << n) > _DP_FLOAT_CAP:
        dmax = max(1, _DP_FLOAT_CAP // (max(nq, 1) * (1 << n)) - 1)
        depth_capped = True

    cand = np.zeros(dmax + 1, dtype=np.int64)
    cols = np.zeros(dmax + 1, dtype=np.int64)
    cum_bytes = np.zeros(dmax + 2, dtype=np.float64)
    cum_cover = np.zeros(dmax + 2, dtype=np.int64)
    dp = np.full((dmax + 2, max(nq, 1), 1 << n), np.inf, dtype=np.float64)
    dp[0, :, 0] = 0.0
    best_cols = np.zeros(dmax + 1, dtype=np.int64)
    cand[0] = (1 << n) - 1

    depth = 0
    best_obj = np.inf
    best_len = 0
    nodes = 0
    finished = False
    wall_hit = False
    deadline = _deadline(config)
    cap = _node_cap(config)
    while not finished and nodes < cap and (nodes == 0 or time.monotonic() < deadline):
        chunk = min(_CHUNK, cap - nodes)
        done, depth, best_obj, best_len, finished, hit = _k.search_layouts(
            n, qmasks, ctx.weights_effective, table, float(ctx.structure),
            float(ctx.c_e), float(budget_bytes), dmax, depth, cand, cols,
            cum_bytes, cum_cover, dp, best_obj, best_cols, best_len, chunk)
        nodes += int(done)
        wall_hit = wall_hit or bool(hit)

    blocks = [SubBlock(mask_to_attrs(_reverse_mask(int(m), n)))
              for m in best_cols[:best_len]]
    layout = Layout(blocks, OVERLAPPING)
    optimal = bool(finished) and not (depth_capped and wall_hit)
    report = cost.query_io(layout, stats, workload, schema, consts)
    return ExactSolution(
        layout=layout,
        objective=float(best_obj),
        optimal=optimal,
        nodes_explored=nodes,
        query_io_eval=report.query_io,
    )


def optimal_cover_cost(layout: Layout, query: Query, stats: BlockStats,
                       schema: Schema,
                       consts: CostConstants = DEFAULT_CONSTANTS
                       ) -> tuple[int, tuple[SubBlock, ...]]:
    """Cheapest set of sub-blocks whose union covers the query.

    Exact subset dynamic program over the query's attributes; this is the
    cover an optimal solver is free to pick, so it lower-bounds the greedy
    covering rule. Returns (total bytes, chosen sub-blocks in layout order).
    """
    if not query.attrs <= layout.attr_union():
        raise ValueError(f"layout does not cover query {query.id} attributes")
    sizes = [cost.sub_block_size(stats, b.attrs, schema, consts) for b in layout.sub_blocks]
    goal = frozenset(query.attrs)
    dp: dict[frozenset[int], tuple[int, int]] = {frozenset(): (0, -1)}

    ordered = sorted(goal)
    for r in range(1, len(ordered) + 1):
        # fill ascending by subset size so every sub-state exists already
        for combo in combinations(ordered, r):
            state = frozenset(combo)
            best: tuple[int, int] | None = None
            for i, b in enumerate(layout.sub_blocks):
                if not b.attrs & state:
                    continue
                rest_cost, _ = dp[state - b.attrs]
                val = sizes[i] + rest_cost
                if best is None or val < best[0]:
                    best = (val, i)
            dp[state] = best if best is not None else (0, -1)

    chosen: list[int] = []
    state = goal
    while state:
        _, pick = dp[state]
        if pick < 0:
            break
        chosen.append(pick)
        state = state - layout.sub_blocks[pick].attrs
    chosen = sorted(set(chosen))
    return dp[goal][0], tuple(layout.sub_blocks[i] for i in chosen)
