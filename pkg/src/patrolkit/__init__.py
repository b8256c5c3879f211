"""Analysis engine for randomized patrolling strategies on location graphs.

Strategies are Markov chains over memory nodes grouped into physical
locations. The package validates strategy files, computes long-term and
transient chain behavior, aggregates memory nodes into locations without
breaking the Markov property, detects broken patrol loops under edge
thresholding, lays the graph out with a four-force scheme, and simulates
seeded patrol agents. ``patrolkit.cli`` and ``patrolkit.service`` expose
everything to scripts and to the companion UI.
"""

from .aggregation import ElementRef, ViewGraph, ViewState, aggregate_stationary, build_view
from .analysis import (
    EdgeFlowMap,
    StationaryDistribution,
    VisitDistributionSeries,
    direct_path_probability,
    edge_flow,
    expected_hitting_time,
    location_mass,
    stationary_distribution,
    tv_to_stationary,
    visit_distribution,
)
from .layout import LayoutParams, LayoutState, init_layout, run_until_converged, step_layout
from .model import (
    Edge,
    Location,
    MemoryNode,
    Strategy,
    TransitionMatrix,
    from_matrix,
    generate_corridor,
    parse_strategy,
    serialize_strategy,
    to_matrix,
    validation_warnings,
)
from .reachability import LoopReport, filter_edges, loop_break_sweep, loop_report
from .simulation import AgentEnsemble, occupancy, single_agent, spawn_agents

__all__ = [
    "AgentEnsemble",
    "Edge",
    "EdgeFlowMap",
    "ElementRef",
    "LayoutParams",
    "LayoutState",
    "Location",
    "LoopReport",
    "MemoryNode",
    "StationaryDistribution",
    "Strategy",
    "TransitionMatrix",
    "ViewGraph",
    "ViewState",
    "VisitDistributionSeries",
    "aggregate_stationary",
    "build_view",
    "direct_path_probability",
    "edge_flow",
    "expected_hitting_time",
    "filter_edges",
    "from_matrix",
    "generate_corridor",
    "init_layout",
    "location_mass",
    "loop_break_sweep",
    "loop_report",
    "occupancy",
    "parse_strategy",
    "run_until_converged",
    "serialize_strategy",
    "single_agent",
    "spawn_agents",
    "stationary_distribution",
    "step_layout",
    "to_matrix",
    "tv_to_stationary",
    "validation_warnings",
    "visit_distribution",
]

__version__ = "0.1.0"
