"""Strategy data model: locations, memory nodes, probabilistic edges.

A strategy is a row-stochastic Markov chain over memory nodes, each node
belonging to exactly one physical location. This module owns the file
format (JSON), the CSV matrix import path, and the corridor generators
used throughout the test fixtures.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DuplicateId, MalformedDocument, RowNotStochastic, UnknownReference
from .graphs import strongly_connected_components

#: Tolerance on |row sum - 1| accepted as stochastic. Strict enough to catch
#: modeling errors, loose enough for 15-digit decimal serialization of 1/3.
STOCHASTIC_TOL = 1e-9


@dataclass(frozen=True)
class Location:
    id: str
    label: str
    member_nodes: tuple[str, ...]


@dataclass(frozen=True)
class MemoryNode:
    id: str
    location: str


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    p: float


@dataclass(frozen=True)
class Strategy:
    """A validated patrolling strategy. Immutable after construction."""

    name: str
    locations: tuple[Location, ...]
    nodes: tuple[MemoryNode, ...]
    edges: tuple[Edge, ...]

    @cached_property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes)

    @cached_property
    def node_index(self) -> dict[str, int]:
        return {n.id: i for i, n in enumerate(self.nodes)}

    @cached_property
    def location_by_id(self) -> dict[str, Location]:
        return {loc.id: loc for loc in self.locations}

    @cached_property
    def location_of(self) -> dict[str, str]:
        return {n.id: n.location for n in self.nodes}

    @cached_property
    def outgoing(self) -> dict[str, tuple[Edge, ...]]:
        out: dict[str, list[Edge]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            out[e.source].append(e)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def edge_lookup(self) -> dict[tuple[str, str], Edge]:
        return {(e.source, e.target): e for e in self.edges}


@dataclass(frozen=True)
class TransitionMatrix:
    """Dense row-stochastic matrix over memory nodes, row = from."""

    order: tuple[str, ...]
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @cached_property
    def index(self) -> dict[str, int]:
        return {node_id: i for i, node_id in enumerate(self.order)}


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise MalformedDocument(message)


def parse_strategy(document: str) -> Strategy:
    """Parse and validate a strategy file.

    Zero-probability edges are dropped; node and location order of the
    file is preserved. Raises MalformedDocument, DuplicateId,
    UnknownReference or RowNotStochastic.
    """
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc}") from exc

    _require(isinstance(raw, dict), "top-level value must be an object")
    for field, kind in (("name", str), ("locations", list), ("nodes", list), ("edges", list)):
        _require(field in raw, f"missing top-level field {field!r}")
        _require(isinstance(raw[field], kind), f"field {field!r} has the wrong type")
    _require(bool(raw["locations"]), "a strategy needs at least one location")
    _require(bool(raw["nodes"]), "a strategy needs at least one memory node")

    locations: list[Location] = []
    seen_locations: set[str] = set()
    for entry in raw["locations"]:
        _require(isinstance(entry, dict), "location entries must be objects")
        loc_id, label = entry.get("id"), entry.get("label")
        _require(isinstance(loc_id, str) and isinstance(label, str),
                 "locations need string 'id' and 'label'")
        if loc_id in seen_locations:
            raise DuplicateId(f"duplicate location id {loc_id!r}")
        seen_locations.add(loc_id)
        locations.append(Location(id=loc_id, label=label, member_nodes=()))

    nodes: list[MemoryNode] = []
    members: dict[str, list[str]] = {loc.id: [] for loc in locations}
    seen_nodes: set[str] = set()
    for entry in raw["nodes"]:
        _require(isinstance(entry, dict), "node entries must be objects")
        node_id, loc_id = entry.get("id"), entry.get("location")
        _require(isinstance(node_id, str) and isinstance(loc_id, str),
                 "nodes need string 'id' and 'location'")
        if node_id in seen_nodes:
            raise DuplicateId(f"duplicate node id {node_id!r}")
        seen_nodes.add(node_id)
        if loc_id not in members:
            raise UnknownReference(f"node {node_id!r} references unknown location {loc_id!r}")
        members[loc_id].append(node_id)
        nodes.append(MemoryNode(id=node_id, location=loc_id))

    for loc in locations:
        _require(bool(members[loc.id]), f"location {loc.id!r} has no member nodes")

    edges: list[Edge] = []
    seen_pairs: set[tuple[str, str]] = set()
    sums: dict[str, float] = {n.id: 0.0 for n in nodes}
    for entry in raw["edges"]:
        _require(isinstance(entry, dict), "edge entries must be objects")
        src, dst, p = entry.get("from"), entry.get("to"), entry.get("p")
        _require(isinstance(src, str) and isinstance(dst, str),
                 "edges need string 'from' and 'to'")
        _require(isinstance(p, (int, float)) and not isinstance(p, bool),
                 "edge 'p' must be a number")
        _require(0.0 <= p <= 1.0, f"edge probability {p!r} outside [0, 1]")
        for endpoint in (src, dst):
            if endpoint not in seen_nodes:
                raise UnknownReference(f"edge references unknown node {endpoint!r}")
        if (src, dst) in seen_pairs:
            raise DuplicateId(f"duplicate edge {src!r} -> {dst!r}")
        seen_pairs.add((src, dst))
        sums[src] += float(p)
        if p > 0.0:
            edges.append(Edge(source=src, target=dst, p=float(p)))

    for node in nodes:
        total = sums[node.id]
        if abs(total - 1.0) > STOCHASTIC_TOL:
            raise RowNotStochastic(node.id, total)

    locations = [
        Location(id=loc.id, label=loc.label, member_nodes=tuple(members[loc.id]))
        for loc in locations
    ]
    return Strategy(
        name=raw["name"],
        locations=tuple(locations),
        nodes=tuple(nodes),
        edges=tuple(edges),
    )


def serialize_strategy(strategy: Strategy) -> str:
    """Inverse of parse_strategy: parse(serialize(s)) == s field-for-field."""
    doc = {
        "name": strategy.name,
        "locations": [{"id": loc.id, "label": loc.label} for loc in strategy.locations],
        "nodes": [{"id": n.id, "location": n.location} for n in strategy.nodes],
        "edges": [{"from": e.source, "to": e.target, "p": e.p} for e in strategy.edges],
    }
    return json.dumps(doc, indent=2) + "\n"


def validation_warnings(strategy: Strategy) -> list[str]:
    """Warning-level checks that do not reject a strategy at parse time.

    Irreducibility is a warning rather than an error: real strategies
    whose useful part is a sub-loop are still worth analyzing.
    """
    warnings = []
    out = strategy.outgoing
    scc = strongly_connected_components(
        strategy.node_ids, lambda v: [e.target for e in out[v]]
    )
    component_count = len(set(scc.values()))
    if component_count > 1:
        warnings.append(
            f"strategy is not irreducible: {component_count} strongly connected "
            "components among memory nodes"
        )
    return warnings


def to_matrix(strategy: Strategy) -> TransitionMatrix:
    """Dense transition matrix in the strategy's node order."""
    n = len(strategy.nodes)
    entries = np.zeros((n, n))
    index = strategy.node_index
    for e in strategy.edges:
        entries[index[e.source], index[e.target]] = e.p
    return TransitionMatrix(order=strategy.node_ids, entries=entries)


def from_matrix(
    matrix: TransitionMatrix,
    location_map: dict[str, str],
    name: str = "imported",
) -> Strategy:
    """Build a Strategy from a dense matrix and a node -> location mapping.

    The result round-trips: to_matrix(from_matrix(m, ...)) equals m exactly.
    """
    entries = np.asarray(matrix.entries, dtype=float)
    for i, node_id in enumerate(matrix.order):
        total = float(entries[i].sum())
        if abs(total - 1.0) > STOCHASTIC_TOL:
            raise RowNotStochastic(node_id, total)
    for node_id in matrix.order:
        if node_id not in location_map:
            raise UnknownReference(f"location map misses node {node_id!r}")

    loc_order: list[str] = []
    members: dict[str, list[str]] = {}
    for node_id in matrix.order:
        loc_id = location_map[node_id]
        if loc_id not in members:
            members[loc_id] = []
            loc_order.append(loc_id)
        members[loc_id].append(node_id)

    locations = tuple(
        Location(id=loc_id, label=loc_id, member_nodes=tuple(members[loc_id]))
        for loc_id in loc_order
    )
    nodes = tuple(
        MemoryNode(id=node_id, location=location_map[node_id]) for node_id in matrix.order
    )
    edges = []
    for i, src in enumerate(matrix.order):
        for j, dst in enumerate(matrix.order):
            p = float(entries[i, j])
            if p > 0.0:
                edges.append(Edge(source=src, target=dst, p=p))
    return Strategy(name=name, locations=locations, nodes=nodes, edges=tuple(edges))


def read_matrix_csv(text: str) -> TransitionMatrix:
    """CSV import: first row and first column carry node ids, cell (i, j) is
    the probability from row-node to column-node."""
    rows = list(csv.reader(io.StringIO(text)))
    _require(len(rows) >= 2, "matrix CSV needs a header row and at least one data row")
    header = [cell.strip() for cell in rows[0][1:]]
    _require(all(header), "matrix CSV header contains empty node ids")
    order = []
    entries = []
    column = {node_id: j for j, node_id in enumerate(header)}
    if len(column) != len(header):
        raise DuplicateId("duplicate node id in matrix CSV header")
    for row in rows[1:]:
        if not row or all(not cell.strip() for cell in row):
            continue
        node_id = row[0].strip()
        _require(len(row) == len(header) + 1,
                 f"row {node_id!r} has {len(row) - 1} cells, expected {len(header)}")
        if node_id in order:
            raise DuplicateId(f"duplicate node id {node_id!r} in matrix CSV")
        if node_id not in column:
            raise MalformedDocument(f"row node {node_id!r} missing from CSV header")
        try:
            values = [float(cell) for cell in row[1:]]
        except ValueError as exc:
            raise MalformedDocument(f"non-numeric cell in row {node_id!r}") from exc
        order.append(node_id)
        entries.append(values)
    _require(len(order) == len(header), "matrix CSV rows do not cover every header node")
    # reorder columns to match row order
    arr = np.array(entries)[:, [column[node_id] for node_id in order]]
    return TransitionMatrix(order=tuple(order), entries=arr)


def read_location_map_csv(text: str) -> dict[str, str]:
    """Two-column CSV (node_id, location_id); an exact header row is skipped."""
    mapping: dict[str, str] = {}
    for row in csv.reader(io.StringIO(text)):
        if not row or all(not cell.strip() for cell in row):
            continue
        _require(len(row) >= 2, "location map rows need two columns")
        node_id, loc_id = row[0].strip(), row[1].strip()
        if (node_id, loc_id) == ("node_id", "location_id"):
            continue
        if node_id in mapping:
            raise DuplicateId(f"duplicate node id {node_id!r} in location map")
        mapping[node_id] = loc_id
    return mapping


def generate_corridor(n: int, with_memory: bool = False) -> Strategy:
    """Corridor fixture with ``n`` intersections between two ends.

    Plain variant: one node per location, ends reflect inward with p=1,
    interior nodes step either way with p=1/2 (end-to-end expected hitting
    time is (n+1)^2, the straight path has probability 2^-n). Memory
    variant: interior locations get a "heading right" and a "heading left"
    node and all edges are deterministic, forming one round-trip loop.
    """
    if n < 0:
        raise ValueError("intersection count must be >= 0")
    count = n + 2
    locations = tuple(
        Location(
            id=f"L{i}",
            label=f"L{i}",
            member_nodes=(f"n{i}",) if (not with_memory or i in (0, count - 1))
            else (f"n{i}R", f"n{i}L"),
        )
        for i in range(count)
    )
    if not with_memory:
        nodes = tuple(MemoryNode(id=f"n{i}", location=f"L{i}") for i in range(count))
        edges = [Edge(source="n0", target="n1", p=1.0)]
        for i in range(1, count - 1):
            edges.append(Edge(source=f"n{i}", target=f"n{i - 1}", p=0.5))
            edges.append(Edge(source=f"n{i}", target=f"n{i + 1}", p=0.5))
        edges.append(Edge(source=f"n{count - 1}", target=f"n{count - 2}", p=1.0))
        return Strategy(
            name=f"corridor-{n}",
            locations=locations,
            nodes=nodes,
            edges=tuple(edges),
        )

    nodes = [MemoryNode(id="n0", location="L0")]
    for i in range(1, count - 1):
        nodes.append(MemoryNode(id=f"n{i}R", location=f"L{i}"))
        nodes.append(MemoryNode(id=f"n{i}L", location=f"L{i}"))
    nodes.append(MemoryNode(id=f"n{count - 1}", location=f"L{count - 1}"))

    rightward = ["n0"] + [f"n{i}R" for i in range(1, count - 1)] + [f"n{count - 1}"]
    leftward = [f"n{i}L" for i in range(count - 2, 0, -1)]
    cycle = rightward + leftward
    edges = tuple(
        Edge(source=cycle[i], target=cycle[(i + 1) % len(cycle)], p=1.0)
        for i in range(len(cycle))
    )
    return Strategy(
        name=f"corridor-memory-{n}",
        locations=locations,
        nodes=tuple(nodes),
        edges=edges,
    )
