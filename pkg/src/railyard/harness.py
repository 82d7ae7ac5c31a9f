"""Experiment harness: single optimizations, parameter sweeps, CSV output.

A sweep varies one knob (attribute count, query-kind count, or the overhead
budget alpha), generates `runs_per_point` random instances per value, and
runs every selected algorithm on the *same* instance within a run so the
comparison is fair. Seeds for each (point, run) derive deterministically from
the base seed, so a sweep is reproducible end to end; the measured
runtime_seconds column is the one inherently non-deterministic field and can
be zeroed with `stable_runtime` for byte-identical output.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

from . import cost, exact, heuristic
from .model import (
    DEFAULT_CONSTANTS,
    BlockStats,
    CostConstants,
    Layout,
    LimitExceededError,
    OptimizerConfig,
    Schema,
    SearchLimits,
    Workload,
)
from .simulate import WorkloadSpec, generate, mix_seed

CSV_HEADER = "sweep_value,algorithm,run_seed,query_io,storage_overhead,runtime_seconds,optimal"

SWEEP_KINDS = ("attributes", "query_kinds", "alpha")

BUDGETED_ALGORITHMS = ("exact_nov", "exact_ov", "greedy_nov", "greedy_ov")
BASELINE_ALGORITHMS = ("single", "per_attribute")
ALGORITHMS = BUDGETED_ALGORITHMS + BASELINE_ALGORITHMS

DEFAULT_SWEEP_VALUES = {
    "attributes": (2, 4, 6, 8, 10, 12, 14, 16),
    "query_kinds": (2, 4, 6, 8, 10, 12, 14),
    "alpha": (0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0),
}


@dataclass(frozen=True)
class ResultRow:
    """One (sweep point, algorithm, run) measurement."""

    sweep_value: float | int | None
    algorithm: str
    run_seed: int
    query_io: float
    storage_overhead: float
    runtime_seconds: float
    optimal: bool


@dataclass(frozen=True)
class SweepConfig:
    sweep_kind: str
    sweep_values: tuple = ()
    runs_per_point: int = 10
    algorithms: tuple[str, ...] = ALGORITHMS
    base_spec: WorkloadSpec = field(default_factory=WorkloadSpec)
    time_budget_seconds: float | None = 60.0
    exact_max_attributes: int = 8  # skip exact solvers above this in sweeps
    stable_runtime: bool = False

    def __post_init__(self) -> None:
        if self.sweep_kind not in SWEEP_KINDS:
            raise ValueError(f"sweep_kind must be one of {SWEEP_KINDS}")
        if self.runs_per_point < 1:
            raise ValueError("runs_per_point must be >= 1")
        values = tuple(self.sweep_values) or DEFAULT_SWEEP_VALUES[self.sweep_kind]
        object.__setattr__(self, "sweep_values", values)
        for alg in self.algorithms:
            if alg not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {alg!r}, expected one of {ALGORITHMS}")


def _solver(algorithm: str) -> Callable:
    return {
        "exact_nov": exact.solve_exact_nov,
        "exact_ov": exact.solve_exact_ov,
        "greedy_nov": heuristic.greedy_nov,
        "greedy_ov": heuristic.greedy_ov,
    }[algorithm]


def run_optimize(schema: Schema, stats: BlockStats, workload: Workload,
                 algorithm: str, config: OptimizerConfig,
                 consts: CostConstants = DEFAULT_CONSTANTS
                 ) -> tuple[ResultRow, Layout]:
    """Run one algorithm and evaluate its layout.

    runtime_seconds covers the solve call only, not workload generation or
    evaluation. query_io always uses the flavor's production covering rule,
    so exact overlapping results are comparable with the greedy ones.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}, expected one of {ALGORITHMS}")
    start = time.perf_counter()
    optimal = True
    if algorithm == "single":
        layout = heuristic.single_partition(schema)
    elif algorithm == "per_attribute":
        layout = heuristic.partition_per_attribute(schema)
    elif algorithm in ("greedy_nov", "greedy_ov"):
        layout = _solver(algorithm)(schema, stats, workload, config, consts)
    else:
        solution = _solver(algorithm)(schema, stats, workload, config, consts)
        layout = solution.layout
        optimal = solution.optimal
    runtime = time.perf_counter() - start
    report = cost.query_io(layout, stats, workload, schema, consts)
    row = ResultRow(
        sweep_value=None, algorithm=algorithm, run_seed=0,
        query_io=report.query_io, storage_overhead=report.overhead,
        runtime_seconds=runtime, optimal=optimal)
    return row, layout


def _spec_for_point(base: WorkloadSpec, kind: str, value) -> WorkloadSpec:
    if kind == "attributes":
        return replace(base, n_attributes=int(value))
    if kind == "query_kinds":
        return replace(base, n_query_kinds=int(value))
    return replace(base, alpha=float(value))


def _warm_up(algorithms: Sequence[str], consts: CostConstants) -> None:
    """Run every selected algorithm once on a toy instance so one-time JIT
    compilation never lands in a measured runtime."""
    schema, workload, stats = generate(WorkloadSpec(n_attributes=2, n_query_kinds=2,
                                                    seed=0))
    config = OptimizerConfig(alpha=1.0)
    for algorithm in algorithms:
        run_optimize(schema, stats, workload, algorithm, config, consts)


def run_sweep(config: SweepConfig,
              consts: CostConstants = DEFAULT_CONSTANTS) -> list[ResultRow]:
    """Run the full sweep and return rows in canonical order.

    A solver that exceeds its size limit yields a NaN row flagged non-optimal
    instead of aborting the sweep; timed-out solvers return their best-so-far
    flagged non-optimal through the normal path.
    """
    _warm_up(config.algorithms, consts)
    rows: list[ResultRow] = []
    for point_idx, value in enumerate(config.sweep_values):
        for run_idx in range(config.runs_per_point):
            seed = mix_seed(config.base_spec.seed, point_idx, run_idx)
            spec = replace(_spec_for_point(config.base_spec, config.sweep_kind, value),
                           seed=seed)
            schema, workload, stats = generate(spec)
            opt_config = OptimizerConfig(
                alpha=spec.alpha,
                limits=SearchLimits(time_budget_seconds=config.time_budget_seconds))
            for algorithm in config.algorithms:
                if (algorithm in ("exact_nov", "exact_ov")
                        and len(schema) > config.exact_max_attributes):
                    rows.append(ResultRow(value, algorithm, seed, math.nan, math.nan,
                                          0.0, False))
                    continue
                try:
                    row, _ = run_optimize(schema, stats, workload, algorithm,
                                          opt_config, consts)
                except LimitExceededError:
                    rows.append(ResultRow(value, algorithm, seed, math.nan, math.nan,
                                          0.0, False))
                    continue
                rows.append(replace(row, sweep_value=value, run_seed=seed))
    if config.stable_runtime:
        rows = [replace(r, runtime_seconds=0.0) for r in rows]
    return sort_rows(rows)


def sort_rows(rows: Sequence[ResultRow]) -> list[ResultRow]:
    """Canonical row order: sweep value, then algorithm; run order is stable."""
    return sorted(rows, key=lambda r: (_value_key(r.sweep_value), r.algorithm))


def _value_key(value) -> float:
    return -math.inf if value is None else float(value)


def _fmt_float(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return repr(float(x))


def rows_to_csv(rows: Sequence[ResultRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        value = "" if r.sweep_value is None else (
            str(r.sweep_value) if isinstance(r.sweep_value, int) else repr(float(r.sweep_value)))
        lines.append(",".join([
            value,
            r.algorithm,
            str(r.run_seed),
            _fmt_float(r.query_io),
            _fmt_float(r.storage_overhead),
            _fmt_float(r.runtime_seconds),
            "true" if r.optimal else "false",
        ]))
    return "\n".join(lines) + "\n"


def write_csv(rows: Sequence[ResultRow], path: str | Path) -> None:
    try:
        Path(path).write_text(rows_to_csv(sort_rows(rows)))
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def _mean_std(values: list[float]) -> tuple[float, float]:
    clean = [v for v in values if not math.isnan(v)]
    if not clean:
        return math.nan, math.nan
    mean = sum(clean) / len(clean)
    var = sum((v - mean) ** 2 for v in clean) / len(clean)
    return mean, math.sqrt(var)


def summarize(rows: Sequence[ResultRow]) -> str:
    """Per (sweep value, algorithm) mean and population standard deviation."""
    groups: dict[tuple, list[ResultRow]] = {}
    for r in sort_rows(rows):
        groups.setdefault((r.sweep_value, r.algorithm), []).append(r)
    lines = [
        "# mean and stddev per (sweep_value, algorithm); stddev is population (divides by n)",
        "# runtime covers the solve call only, not workload generation",
        "sweep_value algorithm runs io_mean io_std overhead_mean overhead_std "
        "runtime_mean runtime_std optimal_runs",
    ]
    for (value, algorithm), group in groups.items():
        io_m, io_s = _mean_std([g.query_io for g in group])
        ov_m, ov_s = _mean_std([g.storage_overhead for g in group])
        rt_m, rt_s = _mean_std([g.runtime_seconds for g in group])
        n_opt = sum(1 for g in group if g.optimal)
        lines.append(" ".join([
            str(value), algorithm, str(len(group)),
            f"{io_m:.6g}", f"{io_s:.6g}", f"{ov_m:.6g}", f"{ov_s:.6g}",
            f"{rt_m:.6g}", f"{rt_s:.6g}", str(n_opt),
        ]))
    return "\n".join(lines) + "\n"


def write_summary(rows: Sequence[ResultRow], path: str | Path) -> None:
    try:
        Path(path).write_text(summarize(rows))
    except OSError as exc:
        raise OSError(f"cannot write summary to {path}: {exc}") from exc


def plot_script(csv_path: str, algorithms: Sequence[str], metric: str = "query_io") -> str:
    """Emit a plain gnuplot script for the sweep CSV (no image rendering
    here; run `gnuplot <script>` wherever plotting is wanted)."""
    col = {"query_io": 4, "storage_overhead": 5, "runtime_seconds": 6}[metric]
    lines = [
        "# gnuplot script generated by railyard sweep",
        "set datafile separator ','",
        "set xlabel 'sweep value'",
        f"set ylabel '{metric}'",
        "set key outside",
        "set term dumb 120,36",
    ]
    plots = []
    for alg in algorithms:
        plots.append(
            f"'{csv_path}' using 1:(strcol(2) eq '{alg}' ? column({col}) : NaN) "
            f"title '{alg}' with points")
    lines.append("plot \\")
    lines.append(", \\\n".join("  " + p for p in plots))
    return "\n".join(lines) + "\n"


def write_plot_script(csv_path: str | Path, algorithms: Sequence[str],
                      path: str | Path, metric: str = "query_io") -> None:
    Path(path).write_text(plot_script(str(csv_path), algorithms, metric))
