"""Seeded random strategy and digraph generators for property tests."""

from __future__ import annotations

import numpy as np

from patrolkit.model import Edge, Location, MemoryNode, Strategy


def random_strategy(
    rng: np.random.Generator,
    max_locations: int = 30,
    max_nodes_per_location: int = 10,
) -> Strategy:
    """Irreducible random strategy: a random cycle through every memory node
    guarantees one strongly connected component, extra edges add branching."""
    loc_count = int(rng.integers(1, max_locations + 1))
    counts = rng.integers(1, max_nodes_per_location + 1, size=loc_count)
    locations = []
    nodes = []
    for li in range(loc_count):
        member = tuple(f"n{li}_{k}" for k in range(counts[li]))
        locations.append(Location(id=f"loc{li}", label=f"loc{li}", member_nodes=member))
        nodes.extend(MemoryNode(id=m, location=f"loc{li}") for m in member)

    total = len(nodes)
    ids = [n.id for n in nodes]
    cycle = rng.permutation(total)
    targets: list[set[int]] = [set() for _ in range(total)]
    for k in range(total):
        targets[cycle[k]].add(int(cycle[(k + 1) % total]))
    extra = int(rng.integers(0, 2 * total + 1))
    for _ in range(extra):
        a = int(rng.integers(total))
        b = int(rng.integers(total))
        targets[a].add(b)

    edges = []
    for i in range(total):
        outs = sorted(targets[i])
        weights = rng.random(len(outs)) + 0.05
        weights /= weights.sum()
        edges.extend(
            Edge(source=ids[i], target=ids[j], p=float(w))
            for j, w in zip(outs, weights)
        )
    return Strategy(
        name="random",
        locations=tuple(locations),
        nodes=tuple(nodes),
        edges=tuple(edges),
    )


def random_open_set(rng: np.random.Generator, strategy: Strategy) -> frozenset[str]:
    mask = rng.random(len(strategy.locations)) < 0.5
    return frozenset(
        loc.id for loc, is_open in zip(strategy.locations, mask) if is_open
    )


def random_digraph(
    rng: np.random.Generator, max_vertices: int = 30
) -> tuple[int, set[tuple[int, int]]]:
    count = int(rng.integers(1, max_vertices + 1))
    density = rng.random() * 0.3
    edges = {
        (a, b)
        for a in range(count)
        for b in range(count)
        if a != b and rng.random() < density
    }
    for _ in range(int(rng.integers(0, count // 3 + 1))):
        v = int(rng.integers(count))
        edges.add((v, v))
    return count, edges
