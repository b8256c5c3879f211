import numpy as np
import pytest

from patrolkit.aggregation import LOCATION, NODE, ElementRef, ViewState, build_view
from patrolkit.layout import (
    LayoutParams,
    init_layout,
    run_until_converged,
    step_layout,
    with_open_locations,
)
from patrolkit.model import Edge, Location, MemoryNode, Strategy, generate_corridor


def single_location() -> Strategy:
    return Strategy(
        name="one",
        locations=(Location(id="A", label="A", member_nodes=("a",)),),
        nodes=(MemoryNode(id="a", location="A"),),
        edges=(Edge("a", "a", 1.0),),
    )


def two_locations() -> Strategy:
    return Strategy(
        name="two",
        locations=(
            Location(id="A", label="A", member_nodes=("a",)),
            Location(id="B", label="B", member_nodes=("b",)),
        ),
        nodes=(MemoryNode(id="a", location="A"), MemoryNode(id="b", location="B")),
        edges=(Edge("a", "b", 1.0), Edge("b", "a", 1.0)),
    )


def hub_with_gates() -> Strategy:
    """Open hub with four members, each wired to its own satellite location."""
    members = tuple(f"h{i}" for i in range(4))
    locations = [Location(id="H", label="H", member_nodes=members)]
    nodes = [MemoryNode(id=m, location="H") for m in members]
    edges = []
    for i in range(4):
        locations.append(Location(id=f"G{i}", label=f"G{i}", member_nodes=(f"g{i}",)))
        nodes.append(MemoryNode(id=f"g{i}", location=f"G{i}"))
        edges.append(Edge(f"h{i}", f"g{i}", 1.0))
        edges.append(Edge(f"g{i}", f"h{(i + 1) % 4}", 1.0))
    return Strategy(
        name="hub", locations=tuple(locations), nodes=tuple(nodes), edges=tuple(edges)
    )


def petal_distances(state, view) -> np.ndarray:
    strategy = view.strategy
    loc_row = {loc.id: i for i, loc in enumerate(strategy.locations)}
    out = []
    for i, node in enumerate(strategy.nodes):
        member = state.positions[len(strategy.locations) + i]
        parent = state.positions[loc_row[node.location]]
        out.append(np.hypot(*(member - parent)))
    return np.array(out)


class TestInit:
    def test_same_seed_is_bitwise_identical(self, three_rooms_strategy):
        view = build_view(three_rooms_strategy, ViewState())
        params = LayoutParams(seed=99)
        a = init_layout(view, params)
        b = init_layout(view, params)
        assert np.array_equal(a.positions, b.positions)
        assert np.array_equal(a.velocities, b.velocities)

    def test_different_seeds_differ(self, three_rooms_strategy):
        view = build_view(three_rooms_strategy, ViewState())
        a = init_layout(view, LayoutParams(seed=1))
        b = init_layout(view, LayoutParams(seed=2))
        assert not np.array_equal(a.positions, b.positions)

    def test_members_start_on_petal_circle(self, airport_strategy):
        view = build_view(airport_strategy, ViewState())
        params = LayoutParams(seed=4)
        state = init_layout(view, params)
        assert petal_distances(state, view) == pytest.approx(params.r_petal)

    def test_locations_start_inside_the_disc(self, office_strategy):
        view = build_view(office_strategy, ViewState())
        params = LayoutParams(seed=8)
        state = init_layout(view, params)
        count = len(office_strategy.locations)
        center = np.array(params.canvas_center)
        dist = np.sqrt(((state.positions[:count] - center) ** 2).sum(axis=1))
        assert dist.max() <= 250.0 + 1e-9

    def test_param_validation(self):
        with pytest.raises(ValueError):
            LayoutParams(damping=1.2)
        with pytest.raises(ValueError):
            LayoutParams(dt=0.0)
        with pytest.raises(ValueError):
            LayoutParams(r_petal=30.0)
        with pytest.raises(ValueError):
            LayoutParams(k_repulse=-1.0)


class TestStep:
    def test_determinism_over_steps(self, three_rooms_strategy):
        view = build_view(three_rooms_strategy, ViewState())
        params = LayoutParams(seed=7)

        def run():
            state = init_layout(view, params)
            for _ in range(50):
                state = step_layout(state, view, params)
            return state.positions

        assert np.array_equal(run(), run())

    def test_petal_radius_invariant_under_stepping(self, airport_strategy):
        view = build_view(airport_strategy, ViewState())
        params = LayoutParams(seed=13)
        state = init_layout(view, params)
        for _ in range(200):
            state = step_layout(state, view, params)
            assert np.abs(petal_distances(state, view) - params.r_petal).max() < 1e-9

    def test_open_members_stay_within_location_radius(self):
        strategy = hub_with_gates()
        view = build_view(strategy, ViewState(open_locations=frozenset({"H"})))
        params = LayoutParams(seed=21)
        state = init_layout(view, params)
        hub_row = 0
        member_rows = [len(strategy.locations) + i for i in range(4)]
        for _ in range(300):
            state = step_layout(state, view, params)
            hub = state.positions[hub_row]
            for row in member_rows:
                assert np.hypot(*(state.positions[row] - hub)) <= params.r_open + 1e-9

    def test_locations_ignore_memory_node_positions(self):
        strategy = hub_with_gates()
        view = build_view(strategy, ViewState(open_locations=frozenset({"H"})))
        params = LayoutParams(seed=2)
        state = init_layout(view, params)
        count = len(strategy.locations)

        scrambled_positions = np.array(state.positions)
        scrambled_positions[count:] += np.linspace(1, 9, scrambled_positions[count:].size).reshape(-1, 2)
        scrambled = type(state)(
            order=state.order,
            positions=scrambled_positions,
            velocities=state.velocities,
            open_locations=state.open_locations,
            iteration=state.iteration,
        )
        after_original = step_layout(state, view, params).positions[:count]
        after_scrambled = step_layout(scrambled, view, params).positions[:count]
        assert np.array_equal(after_original, after_scrambled)

    def test_axial_step_rotates_node_toward_its_edge(self):
        strategy = two_locations()
        view = build_view(strategy, ViewState(open_locations=frozenset({"A"})))
        # gentle axial constant so one step cannot overshoot the alignment
        params = LayoutParams(seed=1, k_axial=0.02, k_attract=0.0, k_gravity=0.0)

        def signed_angle(state):
            i_loc = state.order.index(ElementRef(kind=LOCATION, id="A"))
            i_a = state.order.index(ElementRef(kind=NODE, id="a"))
            i_b = state.order.index(ElementRef(kind=NODE, id="b"))
            radial = state.positions[i_a] - state.positions[i_loc]
            toward = state.positions[i_b] - state.positions[i_loc]
            angle = np.arctan2(radial[1], radial[0]) - np.arctan2(toward[1], toward[0])
            return (angle + np.pi) % (2 * np.pi) - np.pi

        state = init_layout(view, params)
        before = signed_angle(state)
        after = signed_angle(step_layout(state, view, params))
        assert abs(after) < abs(before)

    def test_axial_force_reduces_edge_alignment_error(self):
        strategy = hub_with_gates()
        view = build_view(strategy, ViewState(open_locations=frozenset({"H"})))

        def misalignment(k_axial: float) -> float:
            total = 0.0
            for seed in range(5):
                params = LayoutParams(seed=seed, k_axial=k_axial)
                state, _ = run_until_converged(
                    init_layout(view, params), view, params, tol=1e-3, max_iter=3000
                )
                i_hub = state.order.index(ElementRef(kind=LOCATION, id="H"))
                rows = {n.id: state.order.index(ElementRef(kind=NODE, id=n.id))
                        for n in strategy.nodes}
                for e in strategy.edges:
                    for node, other in ((e.source, e.target), (e.target, e.source)):
                        if strategy.location_of[node] != "H":
                            continue
                        radial = state.positions[rows[node]] - state.positions[i_hub]
                        toward = state.positions[rows[other]] - state.positions[rows[node]]
                        angle = np.arctan2(radial[1], radial[0]) - np.arctan2(
                            toward[1], toward[0]
                        )
                        total += abs((angle + np.pi) % (2 * np.pi) - np.pi)
            return total

        assert misalignment(0.0) > misalignment(0.5)


class TestConvergence:
    def test_single_location_settles_at_the_center(self):
        strategy = single_location()
        view = build_view(strategy, ViewState())
        params = LayoutParams(seed=3)
        state, converged = run_until_converged(
            init_layout(view, params), view, params, tol=1e-3, max_iter=1000
        )
        assert converged
        assert state.iteration < 1000
        center = np.array(params.canvas_center)
        assert np.hypot(*(state.positions[0] - center)) < 1.0

    def test_two_location_equilibrium_separation(self):
        strategy = two_locations()
        view = build_view(strategy, ViewState())
        # the closed form covers attraction and repulsion only
        params = LayoutParams(seed=5, k_gravity=0.0)
        state, converged = run_until_converged(
            init_layout(view, params), view, params, tol=1e-4, max_iter=5000
        )
        assert converged
        separation = np.hypot(*(state.positions[0] - state.positions[1]))
        expected = np.sqrt(params.k_repulse / params.k_attract)
        assert abs(separation - expected) / expected < 0.01

    def test_corridor_straightens(self):
        strategy = generate_corridor(4)
        view = build_view(strategy, ViewState())
        straight = 0
        for seed in range(5):
            params = LayoutParams(seed=seed)
            state, converged = run_until_converged(
                init_layout(view, params), view, params, tol=1e-3, max_iter=2000
            )
            assert converged
            pts = state.positions[:6]
            angles = []
            for i in range(1, 5):
                v1 = pts[i - 1] - pts[i]
                v2 = pts[i + 1] - pts[i]
                cosine = np.dot(v1, v2) / np.linalg.norm(v1) / np.linalg.norm(v2)
                angles.append(np.degrees(np.arccos(np.clip(cosine, -1, 1))))
            if min(angles) >= 170.0:
                straight += 1
        assert straight >= 4

    def test_disconnected_locations_spread_apart(self):
        strategy = Strategy(
            name="five",
            locations=tuple(
                Location(id=f"L{i}", label=f"L{i}", member_nodes=(f"n{i}",))
                for i in range(5)
            ),
            nodes=tuple(MemoryNode(id=f"n{i}", location=f"L{i}") for i in range(5)),
            edges=tuple(Edge(f"n{i}", f"n{i}", 1.0) for i in range(5)),
        )
        view = build_view(strategy, ViewState())
        # strong gravity keeps the zero-edge equilibrium compact enough to reach
        params = LayoutParams(seed=9, k_gravity=0.2)
        state, converged = run_until_converged(
            init_layout(view, params), view, params, tol=1e-3, max_iter=8000
        )
        assert converged
        for i in range(5):
            for j in range(i + 1, 5):
                gap = np.hypot(*(state.positions[i] - state.positions[j]))
                assert gap >= 2 * params.r_closed

    def test_bad_tolerance(self, three_rooms_strategy):
        view = build_view(three_rooms_strategy, ViewState())
        params = LayoutParams(seed=0)
        with pytest.raises(ValueError):
            run_until_converged(init_layout(view, params), view, params, tol=0.0)


class TestOpenCloseTransitions:
    def test_reclosing_projects_members_back(self, airport_strategy):
        params = LayoutParams(seed=31)
        opened = build_view(airport_strategy, ViewState(open_locations=frozenset({"central"})))
        state = init_layout(opened, params)
        for _ in range(100):
            state = step_layout(state, opened, params)

        closed_view = build_view(airport_strategy, ViewState())
        state = with_open_locations(state, closed_view, params)
        assert petal_distances(state, closed_view) == pytest.approx(params.r_petal)
