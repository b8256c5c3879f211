"""Synthetic strategies mirroring the structures the analyses care about.

These stand in for real datasets: a three-room example with a known
stationary distribution, an airport-style hub whose spare memory node
hangs on a 2 % edge, a strategy whose outer ring is reachable only
through a 0.1 % escape edge, and a memory-less office building with a
one-way hallway loop.
"""

from __future__ import annotations

from .model import Edge, Location, MemoryNode, Strategy


def three_rooms() -> Strategy:
    """Three single-node locations; transition matrix
    [[0, 1, 0], [0, 2/3, 1/3], [1/2, 1/2, 0]]."""
    locations = tuple(
        Location(id=f"L{i}", label=f"Room {i}", member_nodes=(f"r{i}",))
        for i in range(3)
    )
    nodes = tuple(MemoryNode(id=f"r{i}", location=f"L{i}") for i in range(3))
    edges = (
        Edge("r0", "r1", 1.0),
        Edge("r1", "r1", 2.0 / 3.0),
        Edge("r1", "r2", 1.0 / 3.0),
        Edge("r2", "r0", 0.5),
        Edge("r2", "r1", 0.5),
    )
    return Strategy(name="three-rooms", locations=locations, nodes=nodes, edges=edges)


def airport() -> Strategy:
    """Hub with four memory nodes and three gates on a strong loop.

    The spare hub node ``hub_x`` is reachable only through a 0.02 edge, so
    an edge threshold of exactly 2 % strands it while everything else
    stays on the loop.
    """
    locations = (
        Location(id="central", label="Central hall",
                 member_nodes=("hub_0", "hub_1", "hub_2", "hub_x")),
        Location(id="gate_a", label="Gate A", member_nodes=("gate_a_0",)),
        Location(id="gate_b", label="Gate B", member_nodes=("gate_b_0",)),
        Location(id="gate_c", label="Gate C", member_nodes=("gate_c_0",)),
    )
    nodes = (
        MemoryNode(id="hub_0", location="central"),
        MemoryNode(id="hub_1", location="central"),
        MemoryNode(id="hub_2", location="central"),
        MemoryNode(id="hub_x", location="central"),
        MemoryNode(id="gate_a_0", location="gate_a"),
        MemoryNode(id="gate_b_0", location="gate_b"),
        MemoryNode(id="gate_c_0", location="gate_c"),
    )
    edges = (
        Edge("gate_a_0", "hub_0", 1.0),
        Edge("hub_0", "gate_b_0", 0.98),
        Edge("hub_0", "hub_x", 0.02),
        Edge("gate_b_0", "hub_1", 1.0),
        Edge("hub_1", "gate_c_0", 1.0),
        Edge("gate_c_0", "hub_2", 1.0),
        Edge("hub_2", "gate_a_0", 1.0),
        Edge("hub_x", "hub_0", 1.0),
    )
    return Strategy(name="airport", locations=locations, nodes=nodes, edges=edges)


def inner_loop() -> Strategy:
    """Tight four-location loop with an outer ring behind a 0.001 edge.

    The sweep's first break is at 0.001 (the escape edge), abandoning the
    whole outer ring; at 0.01 only the inner loop is left standing.
    """
    names = [f"inner_{i}" for i in range(4)] + [f"outer_{i}" for i in range(4)]
    locations = tuple(
        Location(id=name, label=name.replace("_", " "), member_nodes=(f"{name}_n",))
        for name in names
    )
    nodes = tuple(MemoryNode(id=f"{name}_n", location=name) for name in names)
    edges = (
        Edge("inner_0_n", "inner_1_n", 0.999),
        Edge("inner_0_n", "outer_0_n", 0.001),
        Edge("inner_1_n", "inner_2_n", 1.0),
        Edge("inner_2_n", "inner_3_n", 1.0),
        Edge("inner_3_n", "inner_0_n", 1.0),
        Edge("outer_0_n", "outer_1_n", 1.0),
        Edge("outer_1_n", "outer_2_n", 1.0),
        Edge("outer_2_n", "outer_3_n", 1.0),
        Edge("outer_3_n", "inner_0_n", 1.0),
    )
    return Strategy(name="inner-loop", locations=locations, nodes=nodes, edges=edges)


#: side offices per hallway junction; 5 and 7 step cycles keep the chain aperiodic
_OFFICE_COUNTS = (2, 3, 2, 3, 2)


def office() -> Strategy:
    """Memory-less office building: a one-way circular hallway of five
    junctions, each with two or three side offices.

    At a junction the patrol moves on with probability 1/2 or enters one
    of the side offices uniformly; offices lead straight back. The visit
    distribution from any start dips while the wave travels the loop and
    settles close to stationary well before step 100.
    """
    locations: list[Location] = []
    nodes: list[MemoryNode] = []
    edges: list[Edge] = []
    junctions = len(_OFFICE_COUNTS)
    for j, office_count in enumerate(_OFFICE_COUNTS):
        hall = f"hall_{j}"
        locations.append(Location(id=hall, label=f"Hallway {j}", member_nodes=(f"{hall}_n",)))
        nodes.append(MemoryNode(id=f"{hall}_n", location=hall))
        edges.append(Edge(f"{hall}_n", f"hall_{(j + 1) % junctions}_n", 0.5))
        for k in range(office_count):
            room = f"office_{j}_{k}"
            locations.append(Location(id=room, label=f"Office {j}.{k}", member_nodes=(f"{room}_n",)))
            nodes.append(MemoryNode(id=f"{room}_n", location=room))
            edges.append(Edge(f"{hall}_n", f"{room}_n", 0.5 / office_count))
            edges.append(Edge(f"{room}_n", f"{hall}_n", 1.0))
    return Strategy(
        name="office",
        locations=tuple(locations),
        nodes=tuple(nodes),
        edges=tuple(edges),
    )
