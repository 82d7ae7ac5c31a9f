"""Workload-aware sub-block layout optimization for graph disk blocks.

Splits a disk block into sub-blocks that each replicate the block structure
but carry only a subset of the edge attributes, trading bounded extra storage
for less query I/O. Ships an analytical cost model, exact and greedy
partitioners for non-overlapping and overlapping attribute placement, an
integer-program exporter, a seeded workload simulator, and a sweep harness.
"""

from .cost import (
    CostReport,
    covering_sub_blocks_nov,
    covering_sub_blocks_ov,
    query_io,
    storage_overhead,
    storage_overhead_nov,
    sub_block_size,
)
from .exact import ExactSolution, optimal_cover_cost, solve_exact_nov, solve_exact_ov
from .heuristic import greedy_nov, greedy_ov, partition_per_attribute, single_partition
from .ilp import (
    IlpConstraint,
    IlpModel,
    IlpVariable,
    build_ilp_nov,
    build_ilp_ov,
    export_lp,
    import_assignment,
    parse_solution_file,
)
from .model import (
    Attribute,
    BlockStats,
    CostConstants,
    DEFAULT_CONSTANTS,
    Layout,
    LayoutError,
    LimitExceededError,
    NON_OVERLAPPING,
    OVERLAPPING,
    OptimizerConfig,
    Query,
    Schema,
    SearchLimits,
    SubBlock,
    TimeRange,
    Workload,
    time_overlaps,
    validate_layout,
)
from .simulate import WorkloadSpec, generate, query_length_sample, zipf_sample

__version__ = "0.1.0"

__all__ = [
    "Attribute", "BlockStats", "CostConstants", "CostReport", "DEFAULT_CONSTANTS",
    "ExactSolution", "IlpConstraint", "IlpModel", "IlpVariable", "Layout",
    "LayoutError", "LimitExceededError", "NON_OVERLAPPING", "OVERLAPPING",
    "OptimizerConfig", "Query", "Schema", "SearchLimits", "SubBlock", "TimeRange",
    "Workload", "WorkloadSpec", "build_ilp_nov", "build_ilp_ov",
    "covering_sub_blocks_nov", "covering_sub_blocks_ov", "export_lp", "generate",
    "greedy_nov", "greedy_ov", "import_assignment", "optimal_cover_cost",
    "parse_solution_file", "partition_per_attribute", "query_io",
    "query_length_sample", "single_partition", "solve_exact_nov", "solve_exact_ov",
    "storage_overhead", "storage_overhead_nov", "sub_block_size", "time_overlaps",
    "validate_layout", "zipf_sample",
]
