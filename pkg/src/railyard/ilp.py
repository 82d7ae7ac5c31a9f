"""Binary-program models of the layout problem, with LP-file export.

The builders emit the exact constraint families of the two formulations so
any external MILP solver can cross-check the native searches. Variables, all
binary, are:

    x_{a}_{p}      attribute a assigned to partition p
    y_{p}_{q}      partition p is read by query q
    z_{a}_{p}_{q}  query q reads attribute a from partition p
    u_{p}          partition p is non-empty

with p in 1..k, k = |A|. Indicator constraints use the big constant
K = |A| + 1, the smallest value safely above every gated sum. Query weights
are pre-multiplied by the block/query time-overlap indicator so the model
objective equals the evaluated query I/O.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .model import (
    DEFAULT_CONSTANTS,
    BlockStats,
    CostConstants,
    Layout,
    NON_OVERLAPPING,
    OVERLAPPING,
    OptimizerConfig,
    Schema,
    SubBlock,
    Workload,
    time_overlaps,
    validate_layout,
)

BINARY = "binary"
_FEAS_TOL = 1e-6


@dataclass(frozen=True)
class IlpVariable:
    name: str
    kind: str = BINARY
    objective: float = 0.0


@dataclass(frozen=True)
class IlpConstraint:
    name: str
    terms: tuple[tuple[float, str], ...]  # (coefficient, variable name)
    relation: str                         # "<=", ">=", "="
    rhs: float


@dataclass(frozen=True)
class IlpModel:
    variables: tuple[IlpVariable, ...]
    constraints: tuple[IlpConstraint, ...]
    sense: str = "min"
    flavor: str = NON_OVERLAPPING
    k: int = 0  # partition slots

    def __post_init__(self) -> None:
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        declared = set(names)
        for c in self.constraints:
            for _, name in c.terms:
                if name not in declared:
                    raise ValueError(f"constraint {c.name} references undeclared {name}")

    def objective_of(self, name: str) -> float:
        for v in self.variables:
            if v.name == name:
                return v.objective
        raise KeyError(name)


def _effective_weights(stats: BlockStats, workload: Workload) -> dict[int, float]:
    return {q.id: (q.weight if time_overlaps(q.time, stats.time) else 0.0)
            for q in workload.queries}


def _variables(schema: Schema, workload: Workload, weff: Mapping[int, float],
               stats: BlockStats, consts: CostConstants) -> list[IlpVariable]:
    n = len(schema)
    k = n
    structure = consts.per_edge_structure * stats.c_e + consts.per_neighbor_list * stats.c_n
    out: list[IlpVariable] = []
    for a in range(n):
        for p in range(1, k + 1):
            out.append(IlpVariable(f"x_{a}_{p}"))
    for p in range(1, k + 1):
        for q in workload.queries:
            out.append(IlpVariable(f"y_{p}_{q.id}", objective=weff[q.id] * structure))
    for a in range(n):
        for p in range(1, k + 1):
            for q in workload.queries:
                out.append(IlpVariable(
                    f"z_{a}_{p}_{q.id}",
                    objective=weff[q.id] * schema.size_of(a) * stats.c_e))
    for p in range(1, k + 1):
        out.append(IlpVariable(f"u_{p}"))
    return out


def build_ilp_nov(schema: Schema, stats: BlockStats, workload: Workload,
                  config: OptimizerConfig,
                  consts: CostConstants = DEFAULT_CONSTANTS) -> IlpModel:
    """Non-overlapping formulation: every attribute sits in exactly one
    partition, and the overhead bound caps the number of used partitions."""
    stats.require_optimizable()
    workload.validate_against(schema)
    n = len(schema)
    k = n
    big_k = float(n + 1)
    weff = _effective_weights(stats, workload)
    cons: list[IlpConstraint] = []

    for a in range(n):
        cons.append(IlpConstraint(
            f"assign_a{a}",
            tuple((1.0, f"x_{a}_{p}") for p in range(1, k + 1)), "=", 1.0))
    for p in range(1, k + 1):
        for q in workload.queries:
            qa = sorted(q.attrs)
            cons.append(IlpConstraint(
                f"y_ub_p{p}_q{q.id}",
                tuple((1.0, f"x_{a}_{p}") for a in qa) + ((-1.0, f"y_{p}_{q.id}"),),
                ">=", 0.0))
    for p in range(1, k + 1):
        for q in workload.queries:
            qa = sorted(q.attrs)
            cons.append(IlpConstraint(
                f"y_lb_p{p}_q{q.id}",
                ((big_k, f"y_{p}_{q.id}"),) + tuple((-1.0, f"x_{a}_{p}") for a in qa),
                ">=", 0.0))
    for a in range(n):
        for p in range(1, k + 1):
            for q in workload.queries:
                cons.append(IlpConstraint(
                    f"z_force_a{a}_p{p}_q{q.id}",
                    ((1.0, f"z_{a}_{p}_{q.id}"), (-1.0, f"x_{a}_{p}"), (-1.0, f"y_{p}_{q.id}")),
                    ">=", -1.0))
    for p in range(1, k + 1):
        cons.append(IlpConstraint(
            f"u_ub_p{p}",
            tuple((1.0, f"x_{a}_{p}") for a in range(n)) + ((-1.0, f"u_{p}"),),
            ">=", 0.0))
    for p in range(1, k + 1):
        cons.append(IlpConstraint(
            f"u_lb_p{p}",
            ((big_k, f"u_{p}"),) + tuple((-1.0, f"x_{a}_{p}") for a in range(n)),
            ">=", 0.0))

    structure = consts.per_edge_structure * stats.c_e + consts.per_neighbor_list * stats.c_n
    s_block = structure + stats.c_e * schema.total_attr_size
    fraction = structure / s_block
    cons.append(IlpConstraint(
        "overhead",
        tuple((1.0, f"u_{p}") for p in range(1, k + 1)),
        "<=", 1.0 + config.alpha / fraction))

    return IlpModel(
        variables=tuple(_variables(schema, workload, weff, stats, consts)),
        constraints=tuple(cons), flavor=NON_OVERLAPPING, k=k)


def build_ilp_ov(schema: Schema, stats: BlockStats, workload: Workload,
                 config: OptimizerConfig,
                 consts: CostConstants = DEFAULT_CONSTANTS) -> IlpModel:
    """Overlapping formulation: attributes may sit in several partitions, a
    query must find each of its attributes in some partition it reads, and
    the overhead bound is expressed in bytes over the base variables."""
    stats.require_optimizable()
    workload.validate_against(schema)
    n = len(schema)
    k = n
    big_k = float(n + 1)
    weff = _effective_weights(stats, workload)
    cons: list[IlpConstraint] = []

    for a in range(n):
        cons.append(IlpConstraint(
            f"cover_a{a}",
            tuple((1.0, f"x_{a}_{p}") for p in range(1, k + 1)), ">=", 1.0))
    for a in range(n):
        for q in workload.queries:
            cons.append(IlpConstraint(
                f"z_cover_a{a}_q{q.id}",
                tuple((1.0, f"z_{a}_{p}_{q.id}") for p in range(1, k + 1)),
                ">=", 1.0 if a in q.attrs else 0.0))
    for a in range(n):
        for p in range(1, k + 1):
            for q in workload.queries:
                cons.append(IlpConstraint(
                    f"z_in_x_a{a}_p{p}_q{q.id}",
                    ((1.0, f"x_{a}_{p}"), (-1.0, f"z_{a}_{p}_{q.id}")),
                    ">=", 0.0))
    for p in range(1, k + 1):
        for q in workload.queries:
            cons.append(IlpConstraint(
                f"y_ub_p{p}_q{q.id}",
                tuple((1.0, f"z_{a}_{p}_{q.id}") for a in range(n)) + ((-1.0, f"y_{p}_{q.id}"),),
                ">=", 0.0))
    for p in range(1, k + 1):
        for q in workload.queries:
            cons.append(IlpConstraint(
                f"y_lb_p{p}_q{q.id}",
                ((big_k, f"y_{p}_{q.id}"),) + tuple((-1.0, f"z_{a}_{p}_{q.id}") for a in range(n)),
                ">=", 0.0))
    for a in range(n):
        for p in range(1, k + 1):
            for q in workload.queries:
                cons.append(IlpConstraint(
                    f"z_force_a{a}_p{p}_q{q.id}",
                    ((1.0, f"z_{a}_{p}_{q.id}"), (-1.0, f"x_{a}_{p}"), (-1.0, f"y_{p}_{q.id}")),
                    ">=", -1.0))
    for p in range(1, k + 1):
        cons.append(IlpConstraint(
            f"u_ub_p{p}",
            tuple((1.0, f"x_{a}_{p}") for a in range(n)) + ((-1.0, f"u_{p}"),),
            ">=", 0.0))
    for p in range(1, k + 1):
        cons.append(IlpConstraint(
            f"u_lb_p{p}",
            ((big_k, f"u_{p}"),) + tuple((-1.0, f"x_{a}_{p}") for a in range(n)),
            ">=", 0.0))

    structure = consts.per_edge_structure * stats.c_e + consts.per_neighbor_list * stats.c_n
    s_block = structure + stats.c_e * schema.total_attr_size
    terms: list[tuple[float, str]] = []
    for p in range(1, k + 1):
        terms.append((float(structure), f"u_{p}"))
        for a in range(n):
            terms.append((float(schema.size_of(a) * stats.c_e), f"x_{a}_{p}"))
    cons.append(IlpConstraint("overhead", tuple(terms), "<=", s_block * (1.0 + config.alpha)))

    return IlpModel(
        variables=tuple(_variables(schema, workload, weff, stats, consts)),
        constraints=tuple(cons), flavor=OVERLAPPING, k=k)


def _fmt(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def _fmt_terms(terms: tuple[tuple[float, str], ...]) -> str:
    parts: list[str] = []
    for coef, name in terms:
        if coef == 0:
            continue
        if not parts:
            parts.append(f"{_fmt(coef)} {name}")
        elif coef < 0:
            parts.append(f"- {_fmt(-coef)} {name}")
        else:
            parts.append(f"+ {_fmt(coef)} {name}")
    return " ".join(parts)


def export_lp(model: IlpModel) -> str:
    """Serialize to LP text (Minimize / Subject To / Binaries / End).

    Output is byte-deterministic for a given model: variables and constraints
    keep their declared order, zero objective terms are omitted, and every
    variable is declared in the Binaries section.
    """
    lines: list[str] = []
    lines.append("Minimize" if model.sense == "min" else "Maximize")
    obj_terms = tuple((v.objective, v.name) for v in model.variables if v.objective != 0)
    if obj_terms:
        lines.append(f" obj: {_fmt_terms(obj_terms)}")
    else:
        lines.append(f" obj: 0 {model.variables[0].name}" if model.variables else " obj: 0")
    lines.append("Subject To")
    for c in model.constraints:
        lines.append(f" {c.name}: {_fmt_terms(c.terms)} {c.relation} {_fmt(c.rhs)}")
    lines.append("Binaries")
    row: list[str] = []
    for v in model.variables:
        row.append(v.name)
        if len(row) == 8:
            lines.append(" " + " ".join(row))
            row = []
    if row:
        lines.append(" " + " ".join(row))
    lines.append("End")
    return "\n".join(lines) + "\n"


def import_assignment(model: IlpModel, assignment: Mapping[str, int],
                      schema: Schema) -> Layout:
    """Decode a variable assignment back into a layout.

    Every declared variable must be present. All model constraints are
    re-checked; the first violated one is reported by name. Partition p
    becomes the sub-block of attributes with x_{a}_{p} = 1; empty partitions
    are dropped.
    """
    for v in model.variables:
        if v.name not in assignment:
            raise ValueError(f"assignment is missing variable {v.name}")
    for c in model.constraints:
        lhs = sum(coef * assignment[name] for coef, name in c.terms)
        ok = (lhs <= c.rhs + _FEAS_TOL if c.relation == "<="
              else lhs >= c.rhs - _FEAS_TOL if c.relation == ">="
              else abs(lhs - c.rhs) <= _FEAS_TOL)
        if not ok:
            raise ValueError(
                f"assignment violates constraint {c.name}: "
                f"lhs={lhs} {c.relation} rhs={c.rhs}")
    blocks: list[SubBlock] = []
    for p in range(1, model.k + 1):
        attrs = [a for a in range(len(schema)) if assignment[f"x_{a}_{p}"] == 1]
        if attrs:
            blocks.append(SubBlock(attrs))
    seen: list[SubBlock] = []
    for b in blocks:
        if all(b.attrs != s.attrs for s in seen):
            seen.append(b)
    layout = Layout(seen, model.flavor)
    problems = validate_layout(layout, schema)
    if problems:
        raise ValueError("decoded layout invalid: " + "; ".join(problems))
    return layout


def parse_solution_file(text: str) -> dict[str, int]:
    """Parse whitespace-separated "name value" pairs, one per line. Blank
    lines and lines starting with '#' are skipped; values are rounded to the
    nearest integer (solvers emit 0.999999...)."""
    out: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'name value', got {raw!r}")
        try:
            out[parts[0]] = int(round(float(parts[1])))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad value {parts[1]!r}") from exc
    return out
