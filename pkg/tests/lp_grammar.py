"""Strict LP-text reader used to cross-check exported models.

Parses the Minimize / Subject To / Binaries / End dialect the exporter
writes, but only through the public text format: section keywords, `name:
terms` rows, explicit coefficients, and +/- separated terms. Anything
unexpected is a parse error. The result can be handed to scipy's MILP solver
for an external optimum.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_TERM = re.compile(r"^(\d+(?:\.\d+)?(?:e-?\d+)?) ([A-Za-z_][A-Za-z0-9_]*)$")
_NUMBER = re.compile(r"^-?\d+(?:\.\d+)?(?:e-?\d+)?$")


@dataclass
class ParsedLp:
    sense: str
    objective: dict[str, float]
    constraints: list[tuple[str, dict[str, float], str, float]]
    binaries: list[str]


class LpParseError(ValueError):
    pass


def _parse_terms(text: str, where: str) -> dict[str, float]:
    out: dict[str, float] = {}
    chunks = text.split()
    i = 0
    sign = 1.0
    first = True
    while i < len(chunks):
        tok = chunks[i]
        if not first and tok in ("+", "-"):
            sign = 1.0 if tok == "+" else -1.0
            i += 1
            if i >= len(chunks):
                raise LpParseError(f"{where}: dangling sign")
            tok = chunks[i]
        elif not first:
            raise LpParseError(f"{where}: expected +/- between terms, got {tok!r}")
        if tok.startswith("-"):
            sign *= -1.0
            tok = tok[1:]
        if i + 1 >= len(chunks):
            raise LpParseError(f"{where}: coefficient {tok!r} without a variable")
        m = _TERM.match(f"{tok} {chunks[i + 1]}")
        if not m:
            raise LpParseError(f"{where}: bad term {tok!r} {chunks[i + 1]!r}")
        coef, name = float(m.group(1)), m.group(2)
        out[name] = out.get(name, 0.0) + sign * coef
        i += 2
        sign = 1.0
        first = False
    return out


def parse_lp(text: str) -> ParsedLp:
    lines = [ln.rstrip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln.strip() and not ln.lstrip().startswith("\\")]
    idx = 0

    def expect(keyword: str) -> None:
        nonlocal idx
        if idx >= len(lines) or lines[idx].strip().lower() != keyword.lower():
            got = lines[idx].strip() if idx < len(lines) else "<eof>"
            raise LpParseError(f"expected section {keyword!r}, got {got!r}")
        idx += 1

    if idx < len(lines) and lines[idx].strip().lower() in ("minimize", "maximize"):
        sense = "min" if lines[idx].strip().lower() == "minimize" else "max"
        idx += 1
    else:
        raise LpParseError("missing Minimize/Maximize section")

    if idx >= len(lines) or ":" not in lines[idx]:
        raise LpParseError("missing objective row")
    _, body = lines[idx].split(":", 1)
    objective = _parse_terms(body.strip(), "objective")
    idx += 1

    expect("Subject To")
    constraints: list[tuple[str, dict[str, float], str, float]] = []
    while idx < len(lines) and lines[idx].strip().lower() not in ("binaries", "bounds", "end"):
        row = lines[idx].strip()
        if ":" not in row:
            raise LpParseError(f"constraint row without name: {row!r}")
        name, body = row.split(":", 1)
        m = re.search(r"(<=|>=|=)\s*(-?\d+(?:\.\d+)?(?:e-?\d+)?)$", body.strip())
        if not m:
            raise LpParseError(f"constraint {name.strip()!r}: missing relation/rhs")
        rel, rhs = m.group(1), float(m.group(2))
        terms = _parse_terms(body.strip()[: m.start()].strip(), f"constraint {name.strip()}")
        constraints.append((name.strip(), terms, rel, rhs))
        idx += 1

    binaries: list[str] = []
    if idx < len(lines) and lines[idx].strip().lower() == "binaries":
        idx += 1
        while idx < len(lines) and lines[idx].strip().lower() != "end":
            for tok in lines[idx].split():
                if not re.match(r"^[A-Za-z_][A-Za-z0-9_]*$", tok):
                    raise LpParseError(f"bad variable name in Binaries: {tok!r}")
                binaries.append(tok)
            idx += 1
    expect("End")
    if idx != len(lines):
        raise LpParseError(f"trailing content after End: {lines[idx]!r}")

    declared = set(binaries)
    for name in objective:
        if name not in declared:
            raise LpParseError(f"objective references undeclared variable {name}")
    for cname, terms, _, _ in constraints:
        for name in terms:
            if name not in declared:
                raise LpParseError(f"constraint {cname} references undeclared {name}")
    return ParsedLp(sense, objective, constraints, binaries)


def solve_with_scipy(parsed: ParsedLp) -> tuple[float, dict[str, float]]:
    """External optimum of a parsed binary program via scipy (HiGHS)."""
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp

    order = {name: i for i, name in enumerate(parsed.binaries)}
    c = np.zeros(len(order))
    for name, coef in parsed.objective.items():
        c[order[name]] = coef
    if parsed.sense == "max":
        c = -c
    cons = []
    for _, terms, rel, rhs in parsed.constraints:
        row = np.zeros(len(order))
        for name, coef in terms.items():
            row[order[name]] = coef
        lo, hi = {
            "<=": (-np.inf, rhs),
            ">=": (rhs, np.inf),
            "=": (rhs, rhs),
        }[rel]
        cons.append(LinearConstraint(row.reshape(1, -1), lo, hi))
    res = milp(c=c, constraints=cons, integrality=np.ones(len(order)),
               bounds=Bounds(0, 1))
    if res.status != 0:
        raise RuntimeError(f"external solver failed: status={res.status} {res.message}")
    values = {name: float(res.x[i]) for name, i in order.items()}
    fun = float(res.fun) if parsed.sense == "min" else -float(res.fun)
    return fun, values
