"""Self-contained analysis report for a strategy, reproducible from the
strategy file alone. Numbers are rendered at 9 significant digits so the
report is byte-stable across runs and platforms."""

from __future__ import annotations

import hashlib
import math

import numpy as np

from .aggregation import ViewState, build_view
from .analysis import (
    MIXED_TV,
    edge_flow,
    expected_hitting_time,
    location_mass,
    stationary_distribution,
    tv_to_stationary,
    visit_distribution,
)
from .errors import Unreachable
from .model import Strategy, serialize_strategy, to_matrix, validation_warnings
from .reachability import loop_break_sweep

MIXING_HORIZON = 100


def round9(value: float) -> float | None:
    """9-significant-digit rendering; infinities map to null in JSON."""
    if value is None or math.isinf(value) or math.isnan(value):
        return None
    return float(format(value, ".9g"))


def strategy_hash(strategy: Strategy) -> str:
    return hashlib.sha256(serialize_strategy(strategy).encode()).hexdigest()


def build_report(strategy: Strategy, seed: int | None = None) -> dict:
    """Full batch report: stationary behavior, flows, hitting times, the
    loop-break sweep (at memory-node granularity) and per-node mixing."""
    matrix = to_matrix(strategy)
    pi = stationary_distribution(matrix)
    masses = location_mass(pi, strategy)
    absolute = edge_flow(strategy, pi, mode="absolute")
    relative = edge_flow(strategy, pi, mode="relative")

    node_ids = strategy.node_ids
    n = len(node_ids)
    hitting = []
    for src in node_ids:
        row = []
        for dst in node_ids:
            try:
                row.append(round9(expected_hitting_time(matrix, src, dst)))
            except Unreachable:
                row.append(None)
        hitting.append(row)

    open_view = ViewState(open_locations=frozenset(loc.id for loc in strategy.locations))
    sweep = loop_break_sweep(build_view(strategy, open_view))

    mixing = []
    for node_id in node_ids:
        series = visit_distribution(matrix, node_id, horizon=MIXING_HORIZON)
        tv = tv_to_stationary(series, pi)
        peak_step = int(np.argmax(tv)) + 1
        below = np.flatnonzero(tv < MIXED_TV)
        mixing.append(
            {
                "node": node_id,
                "tv_peak": round9(float(tv.max())),
                "peak_step": peak_step,
                "tv_final": round9(float(tv[-1])),
                "steps_to_mix": int(below[0]) + 1 if len(below) else None,
            }
        )

    return {
        "strategy": {
            "name": strategy.name,
            "sha256": strategy_hash(strategy),
            "location_count": len(strategy.locations),
            "node_count": n,
            "edge_count": len(strategy.edges),
        },
        "seed": seed,
        "warnings": validation_warnings(strategy),
        "stationary": {
            "order": list(node_ids),
            "mass": [round9(float(m)) for m in pi.mass],
        },
        "location_mass": [
            {"location": loc.id, "mass": round9(masses[loc.id])}
            for loc in strategy.locations
        ],
        "edge_flow": {
            "absolute": [
                {"from": e.source, "to": e.target,
                 "flow": round9(absolute.flows[(e.source, e.target)])}
                for e in strategy.edges
            ],
            "relative": [
                {"from": e.source, "to": e.target,
                 "flow": round9(relative.flows[(e.source, e.target)])}
                for e in strategy.edges
            ],
        },
        "hitting_time": {"order": list(node_ids), "steps": hitting},
        "loop_break_sweep": [
            {
                "threshold": round9(tau),
                "abandoned": [ref.as_dict() for ref in newly],
            }
            for tau, newly in sweep
        ],
        "mixing": mixing,
    }
