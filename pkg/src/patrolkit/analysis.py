"""Long-term and transient quantities of a strategy.

Stationary distribution, stationary edge flows, t-step visit
distributions, expected hitting times, direct-path probabilities and a
total-variation mixing diagnostic. Everything here is a pure function
over immutable inputs.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    Cancelled,
    NoConvergence,
    NotIrreducible,
    OrderMismatch,
    Unreachable,
    UnknownReference,
)
from .graphs import reachable_from, strongly_connected_components
from .model import Strategy, TransitionMatrix

ABSOLUTE = "absolute"
RELATIVE = "relative"

#: Power iteration stops once the max-abs change between successive
#: iterates drops below this.
STATIONARY_STEP_TOL = 1e-12
STATIONARY_MAX_ITERS = 1_000_000

#: A visit distribution counts as mixed once TV to stationary drops below this.
MIXED_TV = 0.01


@dataclass(frozen=True)
class StationaryDistribution:
    order: tuple[str, ...]
    mass: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.mass, dtype=float).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "mass", arr)

    @cached_property
    def by_node(self) -> dict[str, float]:
        return {node_id: float(m) for node_id, m in zip(self.order, self.mass)}


@dataclass(frozen=True)
class EdgeFlowMap:
    """Stationary flow per ordered edge: f_ij = pi_i * P_ij.

    In relative mode every flow is divided by the maximum flow, so the
    strongest edge reads exactly 1.
    """

    mode: str
    flows: dict[tuple[str, str], float]


@dataclass(frozen=True)
class VisitDistributionSeries:
    """Rows t = 1..horizon of P^t restricted to a fixed start row."""

    start: str
    horizon: int
    order: tuple[str, ...]
    rows: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.rows, dtype=float).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "rows", arr)


def closed_component_count(matrix: TransitionMatrix) -> int:
    """Number of closed (no outgoing edge) strongly connected components."""
    entries = matrix.entries
    n = len(matrix.order)
    successors = [np.flatnonzero(entries[i] > 0.0).tolist() for i in range(n)]
    scc = strongly_connected_components(range(n), lambda i: successors[i])
    closed = set(scc.values())
    for i in range(n):
        for j in successors[i]:
            if scc[j] != scc[i]:
                closed.discard(scc[i])
    return len(closed)


def stationary_distribution(
    matrix: TransitionMatrix,
    *,
    step_tol: float = STATIONARY_STEP_TOL,
    max_iters: int = STATIONARY_MAX_ITERS,
    should_cancel: Callable[[], bool] | None = None,
) -> StationaryDistribution:
    """Unique pi with pi . P = pi, computed by power iteration on the lazy
    chain (P + I) / 2.

    The lazy transform keeps the stationary vector while making the chain
    aperiodic, so the iteration converges even for pure cycles (the memory
    corridor). Raises NotIrreducible when the chain has more than one
    closed component (pi would not be unique) and NoConvergence at the
    iteration cap.
    """
    if closed_component_count(matrix) != 1:
        raise NotIrreducible(
            "stationary distribution is not unique: multiple closed components"
        )
    entries = matrix.entries
    n = len(matrix.order)
    v = np.full(n, 1.0 / n)
    for iteration in range(max_iters):
        if should_cancel is not None and iteration % 256 == 0 and should_cancel():
            raise Cancelled("stationary distribution computation cancelled")
        nxt = 0.5 * (v + v @ entries)
        nxt /= nxt.sum()
        delta = float(np.max(np.abs(nxt - v)))
        v = nxt
        if delta < step_tol:
            return StationaryDistribution(order=matrix.order, mass=v)
    raise NoConvergence(
        f"power iteration did not converge within {max_iters} iterations"
    )


def edge_flow(
    strategy: Strategy, pi: StationaryDistribution, mode: str = ABSOLUTE
) -> EdgeFlowMap:
    """Stationary flow of every edge; see EdgeFlowMap for the two modes."""
    if mode not in (ABSOLUTE, RELATIVE):
        raise ValueError(f"unknown flow mode {mode!r}")
    if pi.order != strategy.node_ids:
        raise OrderMismatch("stationary distribution order differs from strategy order")
    mass = pi.by_node
    flows = {(e.source, e.target): mass[e.source] * e.p for e in strategy.edges}
    if mode == RELATIVE:
        top = max(flows.values())
        if top > 0.0:
            flows = {k: f / top for k, f in flows.items()}
    return EdgeFlowMap(mode=mode, flows=flows)


def location_mass(pi: StationaryDistribution, strategy: Strategy) -> dict[str, float]:
    """Share of time spent in each location: sum of member-node masses."""
    mass = pi.by_node
    return {
        loc.id: sum(mass[node_id] for node_id in loc.member_nodes)
        for loc in strategy.locations
    }


def visit_distribution(
    matrix: TransitionMatrix, start: str, horizon: int = 100
) -> VisitDistributionSeries:
    """Probability distribution over nodes for steps 1..horizon from start.

    Row t is the start row of P^t, built by repeated vector-matrix
    multiplication rather than explicit matrix powers.
    """
    if start not in matrix.index:
        raise UnknownReference(f"unknown start node {start!r}")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    n = len(matrix.order)
    v = np.zeros(n)
    v[matrix.index[start]] = 1.0
    rows = np.empty((horizon, n))
    for t in range(horizon):
        v = v @ matrix.entries
        rows[t] = v
    return VisitDistributionSeries(
        start=start, horizon=horizon, order=matrix.order, rows=rows
    )


def expected_hitting_time(matrix: TransitionMatrix, source: str, target: str) -> float:
    """Expected steps from source to target via the first-step equations
    h_target = 0, h_i = 1 + sum_j P_ij h_j, solved densely.

    Raises Unreachable when target cannot be reached at all; returns inf
    when it is reachable but the walk can drift into a trap that never
    reaches it.
    """
    for node_id in (source, target):
        if node_id not in matrix.index:
            raise UnknownReference(f"unknown node {node_id!r}")
    if source == target:
        return 0.0
    entries = matrix.entries
    n = len(matrix.order)
    succ = [np.flatnonzero(entries[i] > 0.0).tolist() for i in range(n)]
    pred: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in succ[i]:
            pred[j].append(i)

    s, t = matrix.index[source], matrix.index[target]
    can_reach_target = reachable_from(t, lambda i: pred[i])
    if s not in can_reach_target:
        raise Unreachable(f"{target!r} is not reachable from {source!r}")

    # states the walk can visit before first hitting the target
    visited = reachable_from(s, lambda i: succ[i], stop_at=t)
    if any(
        j not in can_reach_target
        for i in visited
        if i != t
        for j in succ[i]
    ):
        return math.inf

    interior = sorted(visited - {t})
    pos = {i: k for k, i in enumerate(interior)}
    m = len(interior)
    a = np.eye(m)
    for i in interior:
        for j in succ[i]:
            if j in pos:
                a[pos[i], pos[j]] -= entries[i, j]
    h = np.linalg.solve(a, np.ones(m))
    return float(h[pos[s]])


def direct_path_probability(strategy: Strategy, path: Sequence[str]) -> float:
    """Product of edge probabilities along the path; 0 if any hop is absent."""
    lookup = strategy.edge_lookup
    result = 1.0
    for src, dst in zip(path, path[1:]):
        edge = lookup.get((src, dst))
        if edge is None:
            return 0.0
        result *= edge.p
    return result


def tv_to_stationary(
    series: VisitDistributionSeries, pi: StationaryDistribution
) -> np.ndarray:
    """Total-variation distance of every step's distribution to pi."""
    if series.order != pi.order:
        raise OrderMismatch("series and stationary distribution use different orders")
    return 0.5 * np.abs(series.rows - pi.mass).sum(axis=1)
