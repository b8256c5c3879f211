"""Collapsing memory nodes into locations and aggregating parallel edges.

A view either shows a location closed (one element) or open (its member
nodes as individual elements). Parallel node-level edges between two view
elements merge under one of three rules; the average rule keeps every
element's outgoing weights summing to 1, so the aggregated graph is again
a Markov chain. Edges internal to a closed location surface as a flagged
self-edge on that location.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .analysis import StationaryDistribution, edge_flow
from .errors import UnknownReference
from .model import Edge, Strategy

RULES = ("sum", "max", "average")
MODES = ("strategy", "path_preference")

LOCATION = "location"
NODE = "node"


@dataclass(frozen=True, order=True)
class ElementRef:
    """Identity of a view element: a closed location or a memory node."""

    kind: str
    id: str

    def as_dict(self) -> dict[str, str]:
        return {"kind": self.kind, "id": self.id}


@dataclass(frozen=True)
class ViewState:
    open_locations: frozenset[str] = frozenset()
    rule: str = "average"
    threshold: float = 0.0
    display_mode: str = "strategy"

    def __post_init__(self):
        object.__setattr__(self, "open_locations", frozenset(self.open_locations))
        if self.rule not in RULES:
            raise ValueError(f"unknown aggregation rule {self.rule!r}")
        if self.display_mode not in MODES:
            raise ValueError(f"unknown display mode {self.display_mode!r}")
        if not 0.0 <= self.threshold < 1.0:
            raise ValueError("threshold must lie in [0, 1)")


@dataclass(frozen=True)
class ViewEdge:
    source: ElementRef
    target: ElementRef
    weight: float
    provenance: tuple[Edge, ...]
    #: internal edges of a closed location, extracted as a self-connection;
    #: retained in the data model, the UI may hide them
    internal: bool = False
    flow: float | None = None
    rel_flow: float | None = None


@dataclass(frozen=True)
class ViewGraph:
    strategy: Strategy = field(repr=False)
    view: ViewState
    elements: tuple[ElementRef, ...]
    edges: tuple[ViewEdge, ...]

    @cached_property
    def members_of(self) -> dict[ElementRef, tuple[str, ...]]:
        """Memory nodes represented by each element."""
        out: dict[ElementRef, tuple[str, ...]] = {}
        by_id = self.strategy.location_by_id
        for element in self.elements:
            if element.kind == LOCATION:
                out[element] = by_id[element.id].member_nodes
            else:
                out[element] = (element.id,)
        return out


def element_for_node(strategy: Strategy, view: ViewState, node_id: str) -> ElementRef:
    """The view element a memory node appears as (itself, or its closed location)."""
    loc_id = strategy.location_of[node_id]
    if loc_id in view.open_locations:
        return ElementRef(kind=NODE, id=node_id)
    return ElementRef(kind=LOCATION, id=loc_id)


def build_view(
    strategy: Strategy, view: ViewState, pi: StationaryDistribution | None = None
) -> ViewGraph:
    """Aggregate the node-level graph into the elements of a view.

    For each ordered pair of elements, the node-level edges from the
    source group to the target group combine as:

      sum      -> sum of probabilities
      max      -> largest probability
      average  -> sum divided by the source element's memory-node count
                  (nodes without an edge to the target contribute 0, which
                  is what keeps the result row-stochastic)

    When ``pi`` is given, every aggregated edge also carries its absolute
    stationary flow (sum of member-edge flows) and the flow relative to
    the strongest edge in this view. Thresholding happens downstream, in
    reachability.
    """
    unknown = view.open_locations - set(strategy.location_by_id)
    if unknown:
        raise UnknownReference(
            f"open_locations references unknown locations: {sorted(unknown)}"
        )

    elements: list[ElementRef] = []
    for loc in strategy.locations:
        if loc.id in view.open_locations:
            elements.extend(ElementRef(kind=NODE, id=n) for n in loc.member_nodes)
        else:
            elements.append(ElementRef(kind=LOCATION, id=loc.id))

    member_count = {
        ElementRef(kind=LOCATION, id=loc.id): len(loc.member_nodes)
        for loc in strategy.locations
    }

    flows = edge_flow(strategy, pi).flows if pi is not None else None

    groups: dict[tuple[ElementRef, ElementRef], list[Edge]] = {}
    group_order: list[tuple[ElementRef, ElementRef]] = []
    for e in strategy.edges:
        key = (
            element_for_node(strategy, view, e.source),
            element_for_node(strategy, view, e.target),
        )
        if key not in groups:
            groups[key] = []
            group_order.append(key)
        groups[key].append(e)

    edges: list[ViewEdge] = []
    for source, target in group_order:
        bundle = groups[(source, target)]
        total = sum(e.p for e in bundle)
        if view.rule == "sum":
            weight = total
        elif view.rule == "max":
            weight = max(e.p for e in bundle)
        else:
            weight = total / member_count.get(source, 1)
        flow = (
            sum(flows[(e.source, e.target)] for e in bundle)
            if flows is not None
            else None
        )
        edges.append(
            ViewEdge(
                source=source,
                target=target,
                weight=weight,
                provenance=tuple(bundle),
                internal=(source == target and source.kind == LOCATION),
                flow=flow,
            )
        )

    if flows is not None and edges:
        top = max(e.flow for e in edges)
        if top > 0.0:
            edges = [
                ViewEdge(
                    source=e.source,
                    target=e.target,
                    weight=e.weight,
                    provenance=e.provenance,
                    internal=e.internal,
                    flow=e.flow,
                    rel_flow=e.flow / top,
                )
                for e in edges
            ]

    return ViewGraph(
        strategy=strategy, view=view, elements=tuple(elements), edges=tuple(edges)
    )


def aggregate_stationary(
    pi: StationaryDistribution, view: ViewState, strategy: Strategy
) -> dict[ElementRef, float]:
    """Stationary mass per view element: closed locations sum their members.

    Defined by summation (time share), not by re-solving on the aggregated
    chain; the two differ for non-lumpable chains.
    """
    mass = pi.by_node
    out: dict[ElementRef, float] = {}
    for loc in strategy.locations:
        if loc.id in view.open_locations:
            for node_id in loc.member_nodes:
                out[ElementRef(kind=NODE, id=node_id)] = mass[node_id]
        else:
            out[ElementRef(kind=LOCATION, id=loc.id)] = sum(
                mass[node_id] for node_id in loc.member_nodes
            )
    return out
