"""Domain types shared by the cost model, the partitioners, and the CLI.

An instance is a schema of sized attributes, a workload of weighted query
kinds with time ranges, and per-block structural counts. A layout splits one
disk block into sub-blocks that each replicate the block structure but carry
only a subset of the attributes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

NON_OVERLAPPING = "non_overlapping"
OVERLAPPING = "overlapping"
FLAVORS = (NON_OVERLAPPING, OVERLAPPING)


class LayoutError(ValueError):
    """A layout violates one of its structural invariants."""


class LimitExceededError(RuntimeError):
    """An exact solver was asked for an instance above its hard size limit."""


@dataclass(frozen=True)
class Attribute:
    """One edge attribute: dense integer id, display name, size in bytes."""

    id: int
    name: str
    size: int

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ValueError(f"attribute id must be >= 0, got {self.id}")
        if self.size < 1:
            raise ValueError(f"attribute size must be >= 1 byte, got {self.size}")


@dataclass(frozen=True)
class Schema:
    """Ordered attribute universe. Ids must be exactly 0..n-1, names unique."""

    attributes: tuple[Attribute, ...]

    def __init__(self, attributes: Iterable[Attribute]) -> None:
        object.__setattr__(self, "attributes", tuple(attributes))
        if not self.attributes:
            raise ValueError("schema must contain at least one attribute")
        ids = [a.id for a in self.attributes]
        if ids != list(range(len(ids))):
            raise ValueError(f"attribute ids must be dense 0..{len(ids) - 1}, got {ids}")
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            raise ValueError(f"attribute names must be unique, got {names}")

    def __len__(self) -> int:
        return len(self.attributes)

    @property
    def all_ids(self) -> frozenset[int]:
        return frozenset(range(len(self.attributes)))

    @property
    def total_attr_size(self) -> int:
        return sum(a.size for a in self.attributes)

    def sizes(self) -> tuple[int, ...]:
        return tuple(a.size for a in self.attributes)

    def size_of(self, attr_id: int) -> int:
        return self.attributes[attr_id].size


@dataclass(frozen=True)
class TimeRange:
    """Closed integer interval [t_start, t_end]."""

    t_start: int
    t_end: int

    def __post_init__(self) -> None:
        if self.t_start > self.t_end:
            raise ValueError(f"empty time range [{self.t_start}, {self.t_end}]")

    def overlaps(self, other: "TimeRange") -> bool:
        return time_overlaps(self, other)


def time_overlaps(x: TimeRange, y: TimeRange) -> bool:
    """Closed-interval intersection test; a shared endpoint counts."""
    return x.t_start <= y.t_end and y.t_start <= x.t_end


@dataclass(frozen=True)
class Query:
    """One query kind: the attribute set it reads, its time range and weight."""

    id: int
    attrs: frozenset[int]
    time: TimeRange
    weight: float

    def __init__(self, id: int, attrs: Iterable[int], time: TimeRange, weight: float) -> None:
        object.__setattr__(self, "id", id)
        object.__setattr__(self, "attrs", frozenset(attrs))
        object.__setattr__(self, "time", time)
        object.__setattr__(self, "weight", weight)
        if not self.attrs:
            raise ValueError(f"query {id} has an empty attribute set")
        if any(a < 0 for a in self.attrs):
            raise ValueError(f"query {id} references a negative attribute id")
        if not self.weight > 0:
            raise ValueError(f"query {id} weight must be > 0, got {weight}")


@dataclass(frozen=True)
class Workload:
    """A set of query kinds with unique ids."""

    queries: tuple[Query, ...]

    def __init__(self, queries: Iterable[Query]) -> None:
        object.__setattr__(self, "queries", tuple(queries))
        ids = [q.id for q in self.queries]
        if len(set(ids)) != len(ids):
            raise ValueError(f"query ids must be unique, got {ids}")

    def __len__(self) -> int:
        return len(self.queries)

    def attribute_frequency(self, attr_id: int) -> float:
        """f(a): total weight of the queries that read attribute `attr_id`."""
        return sum(q.weight for q in self.queries if attr_id in q.attrs)

    def frequencies(self, schema: Schema) -> dict[int, float]:
        freq = {a.id: 0.0 for a in schema.attributes}
        for q in self.queries:
            for a in q.attrs:
                if a in freq:
                    freq[a] += q.weight
        return freq

    def validate_against(self, schema: Schema) -> None:
        """Every query must read only attributes that exist in the schema."""
        n = len(schema)
        for q in self.queries:
            bad = sorted(a for a in q.attrs if a >= n)
            if bad:
                raise ValueError(f"query {q.id} references unknown attribute ids {bad}")


@dataclass(frozen=True)
class BlockStats:
    """Structural counts of one disk block: edges, neighbor lists, time span."""

    c_e: int
    c_n: int
    time: TimeRange

    def __post_init__(self) -> None:
        if self.c_e < 0 or self.c_n < 0:
            raise ValueError(f"block counts must be >= 0, got c_e={self.c_e}, c_n={self.c_n}")

    def require_optimizable(self) -> None:
        # the overhead bound divides by the per-block structure share, which
        # needs at least one edge and one neighbor list
        if self.c_e < 1 or self.c_n < 1:
            raise ValueError(
                f"blocks under optimization need c_e >= 1 and c_n >= 1, "
                f"got c_e={self.c_e}, c_n={self.c_n}"
            )


@dataclass(frozen=True)
class CostConstants:
    """Fixed per-edge and per-neighbor-list structure sizes in bytes.

    The per-edge share covers the edge id and timestamp; the per-list share
    covers the head vertex plus its entry count.
    """

    per_edge_structure: int = 16
    per_neighbor_list: int = 12

    def __post_init__(self) -> None:
        if self.per_edge_structure <= 0 or self.per_neighbor_list <= 0:
            raise ValueError("cost constants must be positive")


DEFAULT_CONSTANTS = CostConstants()


@dataclass(frozen=True)
class SubBlock:
    """One attribute subset replica inside a partitioned block."""

    attrs: frozenset[int]

    def __init__(self, attrs: Iterable[int]) -> None:
        object.__setattr__(self, "attrs", frozenset(attrs))
        if not self.attrs:
            raise LayoutError("sub-blocks must carry at least one attribute")

    def sorted_attrs(self) -> tuple[int, ...]:
        return tuple(sorted(self.attrs))


@dataclass(frozen=True)
class Layout:
    """A partitioning of one block into sub-blocks.

    Duplicate attribute sets are rejected at construction; they only waste
    space and never help any query. Coverage and flavor-specific disjointness
    are checked against a schema by `validate_layout`.
    """

    sub_blocks: tuple[SubBlock, ...]
    flavor: str

    def __init__(self, sub_blocks: Iterable[SubBlock], flavor: str) -> None:
        object.__setattr__(self, "sub_blocks", tuple(sub_blocks))
        object.__setattr__(self, "flavor", flavor)
        if flavor not in FLAVORS:
            raise LayoutError(f"unknown layout flavor {flavor!r}, expected one of {FLAVORS}")
        seen: set[frozenset[int]] = set()
        for b in self.sub_blocks:
            if b.attrs in seen:
                raise LayoutError(f"duplicate sub-block {sorted(b.attrs)}")
            seen.add(b.attrs)

    def __len__(self) -> int:
        return len(self.sub_blocks)

    def attr_union(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for b in self.sub_blocks:
            out |= b.attrs
        return out

    def canonical_key(self) -> tuple[tuple[int, ...], ...]:
        """Order-insensitive identity of the partitioning, for tests and dedup."""
        return tuple(sorted(b.sorted_attrs() for b in self.sub_blocks))


def validate_layout(layout: Layout, schema: Schema) -> list[str]:
    """Check every layout invariant against `schema`.

    Returns a list of human-readable problems; an empty list means the layout
    is valid. Covers: empty sub-blocks, duplicates, unknown attributes,
    coverage gaps, and overlap under the non-overlapping flavor.
    """
    problems: list[str] = []
    seen: set[frozenset[int]] = set()
    for i, b in enumerate(layout.sub_blocks):
        if not b.attrs:
            problems.append(f"sub-block {i} is empty")
            continue
        if b.attrs in seen:
            problems.append(f"duplicate sub-block {sorted(b.attrs)}")
        seen.add(b.attrs)
        unknown = sorted(a for a in b.attrs if a >= len(schema) or a < 0)
        if unknown:
            problems.append(f"sub-block {i} references unknown attribute ids {unknown}")

    housed = layout.attr_union()
    missing = sorted(schema.all_ids - housed)
    if missing:
        names = [schema.attributes[a].name for a in missing]
        problems.append(f"coverage gap: attributes {names} are unhoused")

    if layout.flavor == NON_OVERLAPPING:
        counts: dict[int, int] = {}
        for b in layout.sub_blocks:
            for a in b.attrs:
                counts[a] = counts.get(a, 0) + 1
        repeated = sorted(a for a, c in counts.items() if c > 1)
        if repeated:
            names = [schema.attributes[a].name for a in repeated if a < len(schema)]
            problems.append(f"overlap: attributes {names} appear in multiple sub-blocks")
    return problems


@dataclass(frozen=True)
class SearchLimits:
    """Budgets for the exact solvers.

    `max_enum_attributes` caps set-partition enumeration; `max_search_attributes`
    caps the overlapping search (its tables grow as 2^|A|). `max_nodes` and
    `time_budget_seconds` truncate a search, which then returns its best
    feasible solution flagged as non-optimal. `None` disables a budget.
    """

    max_enum_attributes: int = 12
    max_search_attributes: int = 12
    max_nodes: int | None = None
    time_budget_seconds: float | None = 60.0


@dataclass(frozen=True)
class OptimizerConfig:
    """Storage-overhead budget plus search limits for the exact solvers."""

    alpha: float = 1.0
    limits: SearchLimits = field(default_factory=SearchLimits)

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")


def attrs_to_mask(attrs: Iterable[int]) -> int:
    """Bitmask with bit i set for attribute id i."""
    mask = 0
    for a in attrs:
        mask |= 1 << a
    return mask


def mask_to_attrs(mask: int) -> frozenset[int]:
    out = set()
    bit = 0
    while mask:
        if mask & 1:
            out.add(bit)
        mask >>= 1
        bit += 1
    return frozenset(out)
