"""Command-line harness.

Subcommands:
    optimize    partition one instance (from a file or freshly generated)
    sweep       run an experiment sweep and emit CSV / summary / plot script
    export-lp   write the integer-program model of an instance as an LP file
    catalog     add to / show / validate a persisted layout catalog

Option precedence: command-line flags override the --config JSON file, which
overrides built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from pathlib import Path

from . import harness, ilp, serde
from .harness import ALGORITHMS, SweepConfig, run_optimize, run_sweep
from .model import OptimizerConfig, SearchLimits, TimeRange
from .serde import LayoutCatalog, SerdeError
from .simulate import WorkloadSpec, generate, inject_time_disjoint

_SPEC_FLAGS = {
    "attrs": "n_attributes",
    "queries": "n_query_kinds",
    "alpha": "alpha",
    "c-e": "block_c_e",
    "c-n": "block_c_n",
    "seed": "seed",
    "query-len-mean": "query_len_mean",
    "query-len-stddev": "query_len_stddev",
    "attr-zipf-z": "attr_size_zipf_z",
    "query-zipf-z": "query_freq_zipf_z",
}


def _add_spec_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--attrs", type=int, help="number of attributes")
    parser.add_argument("--queries", type=int, help="number of query kinds")
    parser.add_argument("--alpha", type=float, help="storage overhead budget")
    parser.add_argument("--c-e", type=int, help="edges per block")
    parser.add_argument("--c-n", type=int, help="neighbor lists per block")
    parser.add_argument("--seed", type=int, help="base random seed")
    parser.add_argument("--query-len-mean", type=float)
    parser.add_argument("--query-len-stddev", type=float)
    parser.add_argument("--attr-zipf-z", type=float)
    parser.add_argument("--query-zipf-z", type=float)
    parser.add_argument("--config", type=str, help="JSON config file; flags override it")


def _spec_from_args(args: argparse.Namespace) -> WorkloadSpec:
    values: dict = {}
    if getattr(args, "config", None):
        try:
            values.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise SystemExit(f"error: cannot read config {args.config}: {exc}")
        known = {f.name for f in fields(WorkloadSpec)}
        unknown = set(values) - known
        if unknown:
            raise SystemExit(f"error: unknown config keys {sorted(unknown)}")
    for flag, name in _SPEC_FLAGS.items():
        v = getattr(args, flag.replace("-", "_"), None)
        if v is not None:
            values[name] = v
    if "attr_size_choices" in values:
        values["attr_size_choices"] = tuple(values["attr_size_choices"])
    return WorkloadSpec(**values)


def _load_or_generate(args: argparse.Namespace):
    if args.instance:
        schema, workload, stats = serde.load_instance(args.instance)
        alpha = args.alpha if args.alpha is not None else 1.0
    else:
        spec = _spec_from_args(args)
        schema, workload, stats = generate(spec)
        alpha = spec.alpha
        if getattr(args, "disjoint_queries", 0):
            workload = inject_time_disjoint(workload, stats.time, args.disjoint_queries)
        if getattr(args, "save_instance", None):
            serde.save_instance(args.save_instance, schema, workload, stats)
    return schema, workload, stats, alpha


def _cmd_optimize(args: argparse.Namespace) -> int:
    schema, workload, stats, alpha = _load_or_generate(args)
    config = OptimizerConfig(
        alpha=alpha,
        limits=SearchLimits(time_budget_seconds=args.time_budget))
    row, layout = run_optimize(schema, stats, workload, args.algorithm, config)
    print(f"algorithm:        {args.algorithm}")
    print(f"attributes:       {len(schema)}")
    print(f"query kinds:      {len(workload.queries)}")
    print(f"alpha:            {alpha}")
    print(f"sub-blocks:       {[sorted(b.attrs) for b in layout.sub_blocks]}")
    print(f"query_io:         {row.query_io}")
    print(f"storage_overhead: {row.storage_overhead:.6f}")
    print(f"runtime_seconds:  {row.runtime_seconds:.6f}")
    print(f"optimal:          {str(row.optimal).lower()}")
    if args.layout_out:
        serde.save_layout(args.layout_out, layout)
        print(f"layout written to {args.layout_out}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    base_spec = _spec_from_args(args)
    values: tuple = ()
    if args.values:
        raw = [v.strip() for v in args.values.split(",") if v.strip()]
        values = tuple(float(v) if args.kind == "alpha" else int(v) for v in raw)
    algorithms = tuple(a.strip() for a in args.algorithms.split(",")) \
        if args.algorithms else ALGORITHMS
    config = SweepConfig(
        sweep_kind=args.kind,
        sweep_values=values,
        runs_per_point=args.runs,
        algorithms=algorithms,
        base_spec=base_spec,
        time_budget_seconds=args.time_budget,
        exact_max_attributes=args.exact_max_attrs,
        stable_runtime=args.reproducible,
    )
    rows = run_sweep(config)
    harness.write_csv(rows, args.out)
    print(f"{len(rows)} rows written to {args.out}")
    if args.summary:
        harness.write_summary(rows, args.summary)
        print(f"summary written to {args.summary}")
    if args.plot:
        harness.write_plot_script(args.out, algorithms, args.plot)
        print(f"plot script written to {args.plot}")
    return 0


def _cmd_export_lp(args: argparse.Namespace) -> int:
    schema, workload, stats, alpha = _load_or_generate(args)
    config = OptimizerConfig(alpha=alpha)
    build = ilp.build_ilp_nov if args.flavor == "nov" else ilp.build_ilp_ov
    model = build(schema, stats, workload, config)
    Path(args.out).write_text(ilp.export_lp(model))
    print(f"{len(model.variables)} variables, {len(model.constraints)} constraints "
          f"written to {args.out}")
    return 0


def _cmd_catalog(args: argparse.Namespace) -> int:
    path = Path(args.catalog)
    if args.action == "add":
        entries = list(serde.load_catalog(path).entries) if path.exists() else []
        layout = serde.load_layout(args.layout)
        entries.append((TimeRange(args.t_start, args.t_end), layout))
        catalog = LayoutCatalog(entries)  # rejects overlapping ranges
        serde.save_catalog(catalog, path)
        print(f"{len(catalog.entries)} entries in {path}")
    elif args.action == "show":
        catalog = serde.load_catalog(path)
        for t, lay in catalog.entries:
            blocks = [sorted(b.attrs) for b in lay.sub_blocks]
            print(f"[{t.t_start}, {t.t_end}] {lay.flavor}: {blocks}")
        print(f"{len(catalog.entries)} entries")
    else:  # validate
        catalog = serde.load_catalog(path)
        print(f"ok: {len(catalog.entries)} entries, time ranges disjoint")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="railyard",
        description="workload-aware sub-block layout optimizer for graph disk blocks")
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("optimize", help="partition one instance")
    p_opt.add_argument("--instance", type=str, help="instance JSON file")
    p_opt.add_argument("--algorithm", choices=ALGORITHMS, default="greedy_ov")
    p_opt.add_argument("--time-budget", type=float, default=60.0)
    p_opt.add_argument("--layout-out", type=str, help="write the layout JSON here")
    p_opt.add_argument("--save-instance", type=str, help="write the generated instance here")
    p_opt.add_argument("--disjoint-queries", type=int, default=0,
                       help="shift this many generated queries out of the block's time range")
    _add_spec_flags(p_opt)
    p_opt.set_defaults(func=_cmd_optimize)

    p_sweep = sub.add_parser("sweep", help="run an experiment sweep")
    p_sweep.add_argument("--kind", choices=harness.SWEEP_KINDS, required=True)
    p_sweep.add_argument("--values", type=str,
                         help="comma-separated sweep values (defaults per kind)")
    p_sweep.add_argument("--runs", type=int, default=10)
    p_sweep.add_argument("--algorithms", type=str,
                         help=f"comma-separated subset of {','.join(ALGORITHMS)}")
    p_sweep.add_argument("--out", type=str, required=True, help="CSV output path")
    p_sweep.add_argument("--summary", type=str, help="summary table output path")
    p_sweep.add_argument("--plot", type=str, help="gnuplot script output path")
    p_sweep.add_argument("--time-budget", type=float, default=60.0,
                         help="per exact solve, seconds")
    p_sweep.add_argument("--exact-max-attrs", type=int, default=8,
                         help="skip exact solvers above this attribute count")
    p_sweep.add_argument("--reproducible", action="store_true",
                         help="zero the runtime column for byte-identical output")
    _add_spec_flags(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_lp = sub.add_parser("export-lp", help="write the instance's integer program")
    p_lp.add_argument("--instance", type=str, help="instance JSON file")
    p_lp.add_argument("--flavor", choices=("nov", "ov"), default="nov")
    p_lp.add_argument("--out", type=str, required=True)
    _add_spec_flags(p_lp)
    p_lp.set_defaults(func=_cmd_export_lp)

    p_cat = sub.add_parser("catalog", help="persisted layout catalog")
    p_cat.add_argument("action", choices=("add", "show", "validate"))
    p_cat.add_argument("--catalog", type=str, required=True)
    p_cat.add_argument("--layout", type=str, help="layout JSON file (for add)")
    p_cat.add_argument("--t-start", type=int, help="entry start time (for add)")
    p_cat.add_argument("--t-end", type=int, help="entry end time (for add)")
    p_cat.set_defaults(func=_cmd_catalog)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "catalog" and args.action == "add":
        missing = [f for f in ("layout", "t_start", "t_end") if getattr(args, f) is None]
        if missing:
            parser.error("catalog add requires --layout, --t-start, --t-end")
    try:
        return args.func(args)
    except SerdeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
