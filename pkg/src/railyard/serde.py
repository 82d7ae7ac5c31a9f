"""Canonical JSON documents for instances, layouts, and the layout catalog.

Every document carries a `format_version` field. Field names mirror the
domain types (id/name/size, attrs, t_start/t_end, weight, c_e/c_n,
sub_blocks, flavor). Attributes are referenced by id everywhere outside the
schema listing. Serialization is deterministic: sorted keys, two-space
indent, trailing newline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .model import (
    Attribute,
    BlockStats,
    Layout,
    Query,
    Schema,
    SubBlock,
    TimeRange,
    Workload,
    time_overlaps,
)

FORMAT_VERSION = 1


class SerdeError(ValueError):
    """A document failed to parse or validate; the message carries context."""


@dataclass(frozen=True)
class LayoutCatalog:
    """Static map from disjoint time ranges to the layout used there."""

    entries: tuple[tuple[TimeRange, Layout], ...]

    def __init__(self, entries) -> None:
        object.__setattr__(self, "entries", tuple(entries))
        spans = [t for t, _ in self.entries]
        for i in range(len(spans)):
            for j in range(i + 1, len(spans)):
                if time_overlaps(spans[i], spans[j]):
                    raise SerdeError(
                        f"catalog entries {i} and {j} have overlapping time ranges "
                        f"[{spans[i].t_start},{spans[i].t_end}] and "
                        f"[{spans[j].t_start},{spans[j].t_end}]")


def _dump(doc: dict[str, Any]) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def time_to_dict(t: TimeRange) -> dict[str, int]:
    return {"t_start": t.t_start, "t_end": t.t_end}


def time_from_dict(d: dict[str, Any], where: str) -> TimeRange:
    try:
        return TimeRange(int(d["t_start"]), int(d["t_end"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SerdeError(f"{where}: bad time range {d!r}: {exc}") from exc


def schema_to_dict(schema: Schema) -> dict[str, Any]:
    return {"attributes": [{"id": a.id, "name": a.name, "size": a.size}
                           for a in schema.attributes]}


def schema_from_dict(d: dict[str, Any], where: str = "schema") -> Schema:
    try:
        return Schema([Attribute(int(a["id"]), str(a["name"]), int(a["size"]))
                       for a in d["attributes"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise SerdeError(f"{where}: {exc}") from exc


def workload_to_dict(workload: Workload) -> dict[str, Any]:
    return {"queries": [{"id": q.id, "attrs": sorted(q.attrs),
                         "time": time_to_dict(q.time), "weight": q.weight}
                        for q in workload.queries]}


def workload_from_dict(d: dict[str, Any], where: str = "workload") -> Workload:
    queries = []
    try:
        for q in d["queries"]:
            queries.append(Query(
                id=int(q["id"]),
                attrs=[int(a) for a in q["attrs"]],
                time=time_from_dict(q["time"], f"{where}.query[{q.get('id')}]"),
                weight=float(q["weight"])))
    except SerdeError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SerdeError(f"{where}: {exc}") from exc
    return Workload(queries)


def stats_to_dict(stats: BlockStats) -> dict[str, Any]:
    return {"c_e": stats.c_e, "c_n": stats.c_n, "time": time_to_dict(stats.time)}


def stats_from_dict(d: dict[str, Any], where: str = "block") -> BlockStats:
    try:
        return BlockStats(int(d["c_e"]), int(d["c_n"]),
                          time_from_dict(d["time"], where))
    except SerdeError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SerdeError(f"{where}: {exc}") from exc


def layout_to_dict(layout: Layout) -> dict[str, Any]:
    return {"flavor": layout.flavor,
            "sub_blocks": [sorted(b.attrs) for b in layout.sub_blocks]}


def layout_from_dict(d: dict[str, Any], where: str = "layout") -> Layout:
    try:
        return Layout([SubBlock(int(a) for a in block) for block in d["sub_blocks"]],
                      str(d["flavor"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SerdeError(f"{where}: {exc}") from exc


def instance_to_text(schema: Schema, workload: Workload, stats: BlockStats) -> str:
    return _dump({
        "format_version": FORMAT_VERSION,
        "schema": schema_to_dict(schema),
        "workload": workload_to_dict(workload),
        "block": stats_to_dict(stats),
    })


def _load_doc(path: str | Path) -> dict[str, Any]:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerdeError(f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SerdeError(f"{path}: expected a JSON object at the top level")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise SerdeError(f"{path}: unsupported format_version {version!r}")
    return doc


def save_instance(path: str | Path, schema: Schema, workload: Workload,
                  stats: BlockStats) -> None:
    Path(path).write_text(instance_to_text(schema, workload, stats))


def load_instance(path: str | Path) -> tuple[Schema, Workload, BlockStats]:
    doc = _load_doc(path)
    try:
        schema = schema_from_dict(doc["schema"], f"{path}: schema")
        workload = workload_from_dict(doc["workload"], f"{path}: workload")
        stats = stats_from_dict(doc["block"], f"{path}: block")
    except KeyError as exc:
        raise SerdeError(f"{path}: missing section {exc}") from exc
    workload.validate_against(schema)
    return schema, workload, stats


def save_layout(path: str | Path, layout: Layout) -> None:
    Path(path).write_text(_dump({
        "format_version": FORMAT_VERSION,
        "layout": layout_to_dict(layout),
    }))


def load_layout(path: str | Path) -> Layout:
    doc = _load_doc(path)
    if "layout" not in doc:
        raise SerdeError(f"{path}: missing section 'layout'")
    return layout_from_dict(doc["layout"], f"{path}: layout")


def catalog_to_text(catalog: LayoutCatalog) -> str:
    return _dump({
        "format_version": FORMAT_VERSION,
        "entries": [{"time": time_to_dict(t), "layout": layout_to_dict(lay)}
                    for t, lay in catalog.entries],
    })


def save_catalog(catalog: LayoutCatalog, path: str | Path) -> None:
    Path(path).write_text(catalog_to_text(catalog))


def load_catalog(path: str | Path) -> LayoutCatalog:
    doc = _load_doc(path)
    if "entries" not in doc:
        raise SerdeError(f"{path}: missing section 'entries'")
    entries = []
    for i, e in enumerate(doc["entries"]):
        try:
            t = time_from_dict(e["time"], f"{path}: entry[{i}]")
            lay = layout_from_dict(e["layout"], f"{path}: entry[{i}]")
        except (KeyError, TypeError) as exc:
            raise SerdeError(f"{path}: entry[{i}]: {exc}") from exc
        entries.append((t, lay))
    return LayoutCatalog(entries)
