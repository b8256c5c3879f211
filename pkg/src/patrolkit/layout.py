"""Force-directed 2-D layout for locations and their memory nodes.

Locations drive the global arrangement: linear attraction along shared
edges (weighted by the larger of the two directed aggregate weights),
inverse-distance repulsion between every pair, and gravity toward the
canvas center scaled by the element radius. Memory nodes never move a
location; they repel siblings inside the same location, gravitate toward
their parent's center, and feel the axial force: per incident edge E, a
push of magnitude k_axial * <E, Fx> along Fx, the unit vector
perpendicular to the node -> location-center axis. Members of a closed
location are re-projected onto the petal circle after every step, so the
petal radius is preserved exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .aggregation import LOCATION, NODE, ElementRef, ViewGraph

#: Repulsion distances are floored here to avoid singularities at
#: coincident points.
MIN_DISTANCE = 1e-3

#: Radius of the seeded disc the locations start in.
INIT_DISC_RADIUS = 250.0


@dataclass(frozen=True)
class LayoutParams:
    k_attract: float = 0.05
    k_repulse: float = 500.0
    k_gravity: float = 0.01
    k_axial: float = 0.5
    damping: float = 0.85
    dt: float = 1.0
    r_closed: float = 20.0
    r_open: float = 60.0
    r_petal: float = 12.0
    canvas_center: tuple[float, float] = (500.0, 500.0)
    seed: int = 0

    def __post_init__(self):
        for name in ("k_attract", "k_repulse", "k_gravity", "k_axial"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be a finite non-negative number")
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if not self.r_petal < self.r_closed < self.r_open:
            raise ValueError("radii must satisfy r_petal < r_closed < r_open")


@dataclass(frozen=True)
class LayoutState:
    """Positions and velocities for every location and every memory node.

    ``order`` lists all locations first, then all memory nodes, independent
    of which locations are open; closed locations still expose their petal
    positions.
    """

    order: tuple[ElementRef, ...]
    positions: np.ndarray
    velocities: np.ndarray
    open_locations: frozenset[str]
    iteration: int = 0

    def __post_init__(self):
        for name in ("positions", "velocities"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


class _Context:
    """Arrays derived from a view that stay fixed across steps."""

    def __init__(self, view: ViewGraph, params: LayoutParams):
        strategy = view.strategy
        self.loc_count = len(strategy.locations)
        self.node_count = len(strategy.nodes)
        self.order = tuple(
            [ElementRef(kind=LOCATION, id=loc.id) for loc in strategy.locations]
            + [ElementRef(kind=NODE, id=n.id) for n in strategy.nodes]
        )
        loc_index = {loc.id: i for i, loc in enumerate(strategy.locations)}
        node_index = strategy.node_index

        open_ids = view.view.open_locations
        self.open_mask = np.array(
            [loc.id in open_ids for loc in strategy.locations], dtype=bool
        )
        self.loc_radius = np.where(self.open_mask, params.r_open, params.r_closed)

        # parent location row per memory node
        self.parent = np.array(
            [loc_index[n.location] for n in strategy.nodes], dtype=int
        )

        # sibling pairs (repulsion acts only inside the same location)
        pairs = []
        for loc in strategy.locations:
            rows = [node_index[m] for m in loc.member_nodes]
            for a in range(len(rows)):
                for b in range(a + 1, len(rows)):
                    pairs.append((rows[a], rows[b]))
        self.sibling_pairs = np.array(pairs, dtype=int).reshape(-1, 2)

        # undirected location attraction: the larger of the two directed
        # aggregate weights between each location pair
        attraction: dict[tuple[int, int], float] = {}
        for edge in view.edges:
            src = edge.provenance[0].source
            dst = edge.provenance[0].target
            a = loc_index[strategy.location_of[src]]
            b = loc_index[strategy.location_of[dst]]
            if a == b:
                continue
            key = (min(a, b), max(a, b))
            attraction[key] = max(attraction.get(key, 0.0), edge.weight)
        items = sorted(attraction.items())
        self.attract_pairs = np.array([k for k, _ in items], dtype=int).reshape(-1, 2)
        self.attract_weights = np.array([w for _, w in items])

        # node-level incident edges for the axial force; it only acts on
        # members of open locations (closed petals are re-projected anyway,
        # and long edges would make the tangential dynamics stiff).
        # Self-loops carry a zero-length edge vector, so they are skipped.
        incident = set()
        for e in strategy.edges:
            i, j = node_index[e.source], node_index[e.target]
            if i == j:
                continue
            if self.open_mask[self.parent[i]]:
                incident.add((i, j))
            if self.open_mask[self.parent[j]]:
                incident.add((j, i))
        self.axial_pairs = np.array(sorted(incident), dtype=int).reshape(-1, 2)

        self.center = np.array(params.canvas_center)


def init_layout(view: ViewGraph, params: LayoutParams) -> LayoutState:
    """Seeded initial placement: locations uniform in a disc around the
    canvas center, memory nodes evenly spaced on their parent's petal circle."""
    ctx = _Context(view, params)
    rng = np.random.Generator(np.random.Philox(key=np.uint64(params.seed & (2**64 - 1))))
    positions = np.zeros((ctx.loc_count + ctx.node_count, 2))
    radii = INIT_DISC_RADIUS * np.sqrt(rng.random(ctx.loc_count))
    angles = 2.0 * np.pi * rng.random(ctx.loc_count)
    positions[: ctx.loc_count, 0] = ctx.center[0] + radii * np.cos(angles)
    positions[: ctx.loc_count, 1] = ctx.center[1] + radii * np.sin(angles)

    strategy = view.strategy
    row = ctx.loc_count
    for loc_row, loc in enumerate(strategy.locations):
        count = len(loc.member_nodes)
        for k in range(count):
            theta = 2.0 * np.pi * k / count
            positions[row] = positions[loc_row] + params.r_petal * np.array(
                [np.cos(theta), np.sin(theta)]
            )
            row += 1

    return LayoutState(
        order=ctx.order,
        positions=positions,
        velocities=np.zeros_like(positions),
        open_locations=view.view.open_locations,
        iteration=0,
    )


def step_layout(state: LayoutState, view: ViewGraph, params: LayoutParams) -> LayoutState:
    """One damped integration step; returns the new immutable state."""
    ctx = _Context(view, params)
    new_state, _ = _step(state, ctx, params)
    return new_state


def run_until_converged(
    state: LayoutState,
    view: ViewGraph,
    params: LayoutParams,
    tol: float = 1e-3,
    max_iter: int = 2000,
) -> tuple[LayoutState, bool]:
    """Iterate until the largest per-element displacement drops below tol.

    Returns the final state and whether it converged before max_iter.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    ctx = _Context(view, params)
    for _ in range(max_iter):
        state, moved = _step(state, ctx, params)
        if moved < tol:
            return state, True
    return state, False


def _step(state: LayoutState, ctx: _Context, params: LayoutParams) -> tuple[LayoutState, float]:
    L, N = ctx.loc_count, ctx.node_count
    pos = np.array(state.positions)
    vel = np.array(state.velocities)
    force = np.zeros_like(pos)

    lp = pos[:L]

    # location-location repulsion, magnitude k_repulse / d
    if L > 1:
        diff = lp[:, None, :] - lp[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=2))
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, MIN_DISTANCE)
        magnitude = params.k_repulse / dist**2  # k/d along the unit vector
        np.fill_diagonal(magnitude, 0.0)
        force[:L] += (diff * magnitude[:, :, None]).sum(axis=1)

    # attraction along shared edges, magnitude k_attract * w * d
    if len(ctx.attract_pairs):
        a = ctx.attract_pairs[:, 0]
        b = ctx.attract_pairs[:, 1]
        pull = (lp[b] - lp[a]) * (params.k_attract * ctx.attract_weights)[:, None]
        np.add.at(force, a, pull)
        np.add.at(force, b, -pull)

    # gravity toward the canvas center, magnitude k_gravity * radius;
    # within one radius of the center it decays linearly so elements can
    # actually settle instead of orbiting
    to_center = ctx.center - lp
    d_center = np.sqrt((to_center**2).sum(axis=1))
    grab = np.minimum(1.0, d_center / np.maximum(ctx.loc_radius, MIN_DISTANCE))
    scale = params.k_gravity * ctx.loc_radius * grab / np.maximum(d_center, MIN_DISTANCE)
    force[:L] += to_center * scale[:, None]

    if N:
        np_pos = pos[L:]
        parents = pos[ctx.parent]

        # sibling repulsion inside the same location
        if len(ctx.sibling_pairs):
            a = ctx.sibling_pairs[:, 0]
            b = ctx.sibling_pairs[:, 1]
            diff = np_pos[a] - np_pos[b]
            dist = np.maximum(np.sqrt((diff**2).sum(axis=1)), MIN_DISTANCE)
            push = diff * (params.k_repulse / dist**2)[:, None]
            np.add.at(force, L + a, push)
            np.add.at(force, L + b, -push)

        # gravity toward the parent center, same linear capture zone
        to_parent = parents - np_pos
        d_parent = np.sqrt((to_parent**2).sum(axis=1))
        grab = np.minimum(1.0, d_parent / params.r_petal)
        scale = params.k_gravity * params.r_petal * grab / np.maximum(d_parent, MIN_DISTANCE)
        force[L:] += to_parent * scale[:, None]

        # axial force, perpendicular to the node -> parent-center axis
        if params.k_axial > 0.0 and len(ctx.axial_pairs):
            radial = np_pos - parents
            r_len = np.sqrt((radial**2).sum(axis=1))
            ok = r_len > MIN_DISTANCE
            axis = np.zeros_like(radial)
            axis[ok] = radial[ok] / r_len[ok, None]
            perp = np.stack([-axis[:, 1], axis[:, 0]], axis=1)
            src = ctx.axial_pairs[:, 0]
            counterpart = ctx.axial_pairs[:, 1]
            edge_vec = np_pos[counterpart] - np_pos[src]
            dot = (edge_vec * perp[src]).sum(axis=1)
            np.add.at(force, L + src, (params.k_axial * dot)[:, None] * perp[src])

        # members pinned to the petal circle can only move tangentially;
        # drop the radial force component or it pumps the constraint
        closed = ~ctx.open_mask[ctx.parent]
        if closed.any():
            rel = np_pos[closed] - parents[closed]
            norm = np.maximum(np.sqrt((rel**2).sum(axis=1)), MIN_DISTANCE)
            unit = rel / norm[:, None]
            f = force[L:][closed]
            force[L:][closed] = f - (f * unit).sum(axis=1)[:, None] * unit

    vel = (vel + force * params.dt) * params.damping
    new_pos = pos + vel * params.dt

    # constraints: petals ride their (possibly moved) location exactly on
    # the petal circle; open members stay within the location radius
    if N:
        parents = new_pos[ctx.parent]
        rel = new_pos[L:] - parents
        dist = np.sqrt((rel**2).sum(axis=1))
        closed = ~ctx.open_mask[ctx.parent]

        degenerate = closed & (dist <= MIN_DISTANCE)
        if degenerate.any():
            rel[degenerate] = np.array([1.0, 0.0])
            dist[degenerate] = 1.0

        new_pos[L:][closed] = (
            parents[closed] + rel[closed] * (params.r_petal / dist[closed])[:, None]
        )
        # kill the velocity component normal to the circle constraint
        # (relative to the parent), or gravity would pump it forever
        unit = rel[closed] / dist[closed][:, None]
        v_rel = vel[L:][closed] - vel[ctx.parent][closed]
        v_rel -= (v_rel * unit).sum(axis=1)[:, None] * unit
        vel[L:][closed] = vel[ctx.parent][closed] + v_rel

        clamp = ~closed & (dist > params.r_open)
        if clamp.any():
            new_pos[L:][clamp] = (
                parents[clamp] + rel[clamp] * (params.r_open / dist[clamp])[:, None]
            )

    moved = float(np.max(np.sqrt(((new_pos - pos) ** 2).sum(axis=1)))) if len(pos) else 0.0
    return (
        LayoutState(
            order=state.order,
            positions=new_pos,
            velocities=vel,
            open_locations=state.open_locations,
            iteration=state.iteration + 1,
        ),
        moved,
    )


def with_open_locations(
    state: LayoutState, view: ViewGraph, params: LayoutParams
) -> LayoutState:
    """Mirror a changed open/closed set into the state, re-projecting the
    members of newly closed locations onto the petal circle immediately."""
    ctx = _Context(view, params)
    pos = np.array(state.positions)
    L = ctx.loc_count
    parents = pos[ctx.parent]
    rel = pos[L:] - parents
    dist = np.sqrt((rel**2).sum(axis=1))
    closed = ~ctx.open_mask[ctx.parent]
    degenerate = closed & (dist <= MIN_DISTANCE)
    if degenerate.any():
        rel[degenerate] = np.array([1.0, 0.0])
        dist[degenerate] = 1.0
    pos[L:][closed] = (
        parents[closed] + rel[closed] * (params.r_petal / dist[closed])[:, None]
    )
    return replace(
        state,
        positions=pos,
        velocities=state.velocities,
        open_locations=view.view.open_locations,
    )
