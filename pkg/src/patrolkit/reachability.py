"""Edge thresholding, strongly connected components and loop-break sweeps.

An element is on a patrol loop when it sits in a strongly connected
component of size two or more, or carries a surviving self-edge. Raising
the edge threshold removes weak edges and can strand elements outside
every loop; the sweep finds exactly the thresholds where that happens.
"""

from __future__ import annotations

from dataclasses import dataclass

from .aggregation import ElementRef, ViewEdge, ViewGraph, ViewState
from .graphs import strongly_connected_components


@dataclass(frozen=True)
class LoopReport:
    surviving_edges: tuple[ViewEdge, ...]
    scc_id: dict[ElementRef, int]
    on_loop: dict[ElementRef, bool]
    abandoned: tuple[ElementRef, ...]


def display_weight(edge: ViewEdge, display_mode: str) -> float:
    """The weight an edge is drawn (and thresholded) with in a display mode."""
    if display_mode == "path_preference":
        if edge.rel_flow is None:
            raise ValueError(
                "path preference weights unavailable: the view was built "
                "without a stationary distribution"
            )
        return edge.rel_flow
    return edge.weight


def filter_edges(graph: ViewGraph, threshold: float) -> tuple[ViewEdge, ...]:
    """Edges whose displayed weight survives the threshold (strictly greater,
    so setting the threshold to a weight value removes those edges)."""
    mode = graph.view.display_mode
    return tuple(e for e in graph.edges if display_weight(e, mode) > threshold)


def loop_report(graph: ViewGraph, view: ViewState | None = None) -> LoopReport:
    """Threshold, then recompute components and loop membership from scratch."""
    if view is None:
        view = graph.view
    surviving = tuple(
        e for e in graph.edges if display_weight(e, view.display_mode) > view.threshold
    )
    successors: dict[ElementRef, list[ElementRef]] = {el: [] for el in graph.elements}
    self_edge: set[ElementRef] = set()
    for e in surviving:
        if e.source == e.target:
            self_edge.add(e.source)
        else:
            successors[e.source].append(e.target)
    scc_id = strongly_connected_components(graph.elements, lambda el: successors[el])
    size: dict[int, int] = {}
    for component in scc_id.values():
        size[component] = size.get(component, 0) + 1
    on_loop = {
        el: size[scc_id[el]] >= 2 or el in self_edge for el in graph.elements
    }
    abandoned = tuple(el for el in graph.elements if not on_loop[el])
    return LoopReport(
        surviving_edges=surviving, scc_id=scc_id, on_loop=on_loop, abandoned=abandoned
    )


def loop_break_sweep(
    graph: ViewGraph, view: ViewState | None = None
) -> list[tuple[float, tuple[ElementRef, ...]]]:
    """Thresholds at which the abandoned set grows, ascending.

    Candidate thresholds are exactly the distinct displayed edge weights
    (restricted to [0, 1), the slider's range); between two consecutive
    weights the surviving edge set cannot change.
    """
    if view is None:
        view = graph.view
    weights = sorted(
        {
            w
            for e in graph.edges
            if 0.0 <= (w := display_weight(e, view.display_mode)) < 1.0
        }
    )
    previous = set(loop_report(graph, _with_threshold(view, 0.0)).abandoned)
    breaks: list[tuple[float, tuple[ElementRef, ...]]] = []
    for tau in weights:
        abandoned = set(loop_report(graph, _with_threshold(view, tau)).abandoned)
        if abandoned - previous:
            newly = tuple(el for el in graph.elements if el in abandoned - previous)
            breaks.append((tau, newly))
        previous = abandoned
    return breaks


def _with_threshold(view: ViewState, tau: float) -> ViewState:
    return ViewState(
        open_locations=view.open_locations,
        rule=view.rule,
        threshold=tau,
        display_mode=view.display_mode,
    )
