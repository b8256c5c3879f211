"""Generic directed-graph helpers shared by the model and reachability layers."""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable
from typing import TypeVar

T = TypeVar("T", bound=Hashable)


def strongly_connected_components(
    items: Iterable[T], successors: Callable[[T], Iterable[T]]
) -> dict[T, int]:
    """Kosaraju-Sharir strongly connected components.

    Two-pass iterative DFS: the first pass over the forward graph records
    finish order, the second pass sweeps the transpose in reverse finish
    order. Component ids are assigned in reverse topological order of the
    condensation (an edge between components always points from a higher
    id to a lower one), deterministically for a given item order.
    """
    order = list(items)
    adjacency = {v: list(successors(v)) for v in order}
    transpose: dict[T, list[T]] = {v: [] for v in order}
    for v in order:
        for w in adjacency[v]:
            transpose[w].append(v)

    finish: list[T] = []
    seen: set[T] = set()
    for root in order:
        if root in seen:
            continue
        seen.add(root)
        # stack holds (vertex, iterator over its successors)
        stack = [(root, iter(adjacency[root]))]
        while stack:
            vertex, it = stack[-1]
            advanced = False
            for w in it:
                if w not in seen:
                    seen.add(w)
                    stack.append((w, iter(adjacency[w])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                finish.append(vertex)

    emitted: dict[T, int] = {}
    component = 0
    for root in reversed(finish):
        if root in emitted:
            continue
        stack2 = [root]
        emitted[root] = component
        while stack2:
            vertex = stack2.pop()
            for w in transpose[vertex]:
                if w not in emitted:
                    emitted[w] = component
                    stack2.append(w)
        component += 1

    # second-pass emission is topological; flip so sinks get the low ids
    return {v: component - 1 - c for v, c in emitted.items()}


def reachable_from(
    start: T, successors: Callable[[T], Iterable[T]], *, stop_at: T | None = None
) -> set[T]:
    """Forward reachability by BFS; ``stop_at`` is reached but not expanded."""
    seen = {start}
    queue = [start]
    while queue:
        vertex = queue.pop()
        if stop_at is not None and vertex == stop_at:
            continue
        for w in successors(vertex):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen
