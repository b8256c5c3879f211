"""Local HTTP session service backing scripted use and the companion UI.

One strategy per session; mutations are serialized per session and every
state-changing response carries a monotonically increasing revision so
clients can discard stale responses. The graph payload is assembled under
the session lock and names the revision it reflects. Strategy-scoped
queries (matrix, distributions, occupancy at an explicit step) carry no
revision at all: their responses are identical before and after unrelated
state changes.
"""

from __future__ import annotations

import secrets
import threading
import uuid
from dataclasses import dataclass, field
from typing import Any

from fastapi import Body, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .aggregation import (
    LOCATION,
    MODES,
    NODE,
    RULES,
    ElementRef,
    ViewGraph,
    ViewState,
    aggregate_stationary,
    build_view,
)
from .analysis import (
    StationaryDistribution,
    stationary_distribution,
    visit_distribution,
)
from .errors import (
    CursorOutOfRange,
    NotIrreducible,
    PatrolError,
    SessionNotFound,
    UnknownReference,
)
from .layout import (
    LayoutParams,
    LayoutState,
    init_layout,
    run_until_converged,
    step_layout,
    with_open_locations,
)
from .model import (
    Strategy,
    TransitionMatrix,
    parse_strategy,
    to_matrix,
    validation_warnings,
)
from .reachability import LoopReport, display_weight, loop_report
from .simulation import AgentEnsemble, occupancy, single_agent, spawn_agents

_STATUS = {
    "session_not_found": 404,
    "unknown_reference": 404,
    "not_irreducible": 409,
    "cursor_out_of_range": 422,
    "malformed_document": 422,
    "duplicate_id": 422,
    "row_not_stochastic": 422,
    "order_mismatch": 422,
    "unreachable": 422,
    "invalid_value": 422,
}

_CACHE_CAP = 64


@dataclass
class Session:
    id: str
    strategy: Strategy
    matrix: TransitionMatrix
    pi: StationaryDistribution | None
    view: ViewState
    params: LayoutParams
    layout: LayoutState
    warnings: list[str]
    revision: int = 1
    ensemble: AgentEnsemble | None = None
    lock: threading.RLock = field(default_factory=threading.RLock)
    view_graphs: dict[ViewState, ViewGraph] = field(default_factory=dict)
    loop_reports: dict[ViewState, LoopReport] = field(default_factory=dict)
    visit_series: dict[tuple[str, int], Any] = field(default_factory=dict)

    def bump(self) -> int:
        self.revision += 1
        return self.revision

    def graph_for(self, view: ViewState) -> ViewGraph:
        if view not in self.view_graphs:
            if len(self.view_graphs) >= _CACHE_CAP:
                self.view_graphs.clear()
            self.view_graphs[view] = build_view(self.strategy, view, pi=self.pi)
        return self.view_graphs[view]

    def report_for(self, view: ViewState) -> LoopReport:
        if view not in self.loop_reports:
            if len(self.loop_reports) >= _CACHE_CAP:
                self.loop_reports.clear()
            self.loop_reports[view] = loop_report(self.graph_for(view))
        return self.loop_reports[view]


def _error_response(code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=_STATUS.get(code, 400),
        content={"error": {"code": code, "message": message}},
    )


def create_app() -> FastAPI:
    app = FastAPI(title="patrolkit session service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}

    @app.exception_handler(PatrolError)
    async def _patrol_error(_request: Request, exc: PatrolError):
        return _error_response(exc.code, str(exc))

    @app.exception_handler(ValueError)
    async def _value_error(_request: Request, exc: ValueError):
        return _error_response("invalid_value", str(exc))

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise SessionNotFound(f"no session {session_id!r}")
        return session

    @app.post("/session")
    def create_session(body: dict = Body(...)):
        if "strategy" in body:
            import json as _json

            strategy = parse_strategy(_json.dumps(body["strategy"]))
        elif "path" in body:
            with open(body["path"], encoding="utf-8") as handle:
                strategy = parse_strategy(handle.read())
        else:
            raise ValueError("body must carry 'strategy' (inline document) or 'path'")

        layout_seed = body.get("layout_seed")
        if layout_seed is None:
            layout_seed = secrets.randbelow(2**63)

        matrix = to_matrix(strategy)
        try:
            pi = stationary_distribution(matrix)
        except NotIrreducible:
            pi = None

        view = ViewState()
        params = LayoutParams(seed=int(layout_seed))
        graph = build_view(strategy, view, pi=pi)
        session = Session(
            id=uuid.uuid4().hex,
            strategy=strategy,
            matrix=matrix,
            pi=pi,
            view=view,
            params=params,
            layout=init_layout(graph, params),
            warnings=validation_warnings(strategy),
        )
        session.view_graphs[view] = graph
        sessions[session.id] = session
        return {
            "session_id": session.id,
            "revision": session.revision,
            "name": strategy.name,
            "warnings": session.warnings,
            "layout_seed": int(layout_seed),
            "stationary_available": pi is not None,
        }

    @app.get("/session/{session_id}/graph")
    def get_graph(session_id: str):
        session = get_session(session_id)
        with session.lock:
            return _graph_payload(session)

    @app.post("/session/{session_id}/threshold")
    def set_threshold(session_id: str, body: dict = Body(...)):
        session = get_session(session_id)
        if "value" not in body:
            raise ValueError("body must carry 'value'")
        value = float(body["value"])
        with session.lock:
            session.view = ViewState(
                open_locations=session.view.open_locations,
                rule=session.view.rule,
                threshold=value,
                display_mode=session.view.display_mode,
            )
            return {"revision": session.bump(), "threshold": value}

    @app.post("/session/{session_id}/location/{location_id}/toggle")
    def toggle_location(session_id: str, location_id: str):
        session = get_session(session_id)
        with session.lock:
            if location_id not in session.strategy.location_by_id:
                raise UnknownReference(f"unknown location {location_id!r}")
            open_set = set(session.view.open_locations)
            now_open = location_id not in open_set
            if now_open:
                open_set.add(location_id)
            else:
                open_set.discard(location_id)
            session.view = ViewState(
                open_locations=frozenset(open_set),
                rule=session.view.rule,
                threshold=session.view.threshold,
                display_mode=session.view.display_mode,
            )
            session.layout = with_open_locations(
                session.layout, session.graph_for(session.view), session.params
            )
            return {
                "revision": session.bump(),
                "location": location_id,
                "open": now_open,
            }

    @app.post("/session/{session_id}/rule")
    def set_rule(session_id: str, body: dict = Body(...)):
        session = get_session(session_id)
        rule = body.get("rule")
        if rule not in RULES:
            raise ValueError(f"rule must be one of {RULES}")
        with session.lock:
            session.view = ViewState(
                open_locations=session.view.open_locations,
                rule=rule,
                threshold=session.view.threshold,
                display_mode=session.view.display_mode,
            )
            return {"revision": session.bump(), "rule": rule}

    @app.post("/session/{session_id}/mode")
    def set_mode(session_id: str, body: dict = Body(...)):
        session = get_session(session_id)
        mode = body.get("mode")
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        with session.lock:
            if mode == "path_preference" and session.pi is None:
                raise NotIrreducible(
                    "path preference needs a stationary distribution, but this "
                    "strategy has multiple closed components"
                )
            session.view = ViewState(
                open_locations=session.view.open_locations,
                rule=session.view.rule,
                threshold=session.view.threshold,
                display_mode=mode,
            )
            return {"revision": session.bump(), "display_mode": mode}

    @app.get("/session/{session_id}/distribution")
    def get_distribution(
        session_id: str, start: str, target: str | None = None, horizon: int = 100
    ):
        session = get_session(session_id)
        with session.lock:
            key = (start, horizon)
            if key not in session.visit_series:
                if len(session.visit_series) >= _CACHE_CAP:
                    session.visit_series.clear()
                session.visit_series[key] = visit_distribution(
                    session.matrix, start, horizon=horizon
                )
            series = session.visit_series[key]
            payload = {
                "start": start,
                "horizon": horizon,
                "order": list(series.order),
                "rows": series.rows.tolist(),
            }
            if target is not None:
                if target not in session.matrix.index:
                    raise UnknownReference(f"unknown node {target!r}")
                column = session.matrix.index[target]
                payload["target"] = target
                payload["series"] = series.rows[:, column].tolist()
            return payload

    @app.get("/session/{session_id}/matrix")
    def get_matrix(session_id: str):
        session = get_session(session_id)
        with session.lock:
            return {
                "order": list(session.matrix.order),
                "rows": session.matrix.entries.tolist(),
            }

    @app.post("/session/{session_id}/agents")
    def agents(session_id: str, body: dict = Body(...)):
        session = get_session(session_id)
        with session.lock:
            if "cursor" in body:
                if session.ensemble is None:
                    raise CursorOutOfRange("no agents spawned yet")
                t = int(body["cursor"])
                if not 0 <= t <= session.ensemble.horizon:
                    raise CursorOutOfRange(
                        f"cursor {t} outside [0, {session.ensemble.horizon}]"
                    )
                session.ensemble.cursor = t
                return {"revision": session.bump(), "cursor": t}
            if "start" not in body:
                raise ValueError("body must carry 'start' (spawn) or 'cursor'")
            seed = body.get("seed")
            if seed is None:
                seed = secrets.randbelow(2**63)
            session.ensemble = spawn_agents(
                session.strategy,
                body["start"],
                count=int(body.get("count", 400)),
                horizon=int(body.get("horizon", 100)),
                seed=int(seed),
            )
            return {
                "revision": session.bump(),
                "start": session.ensemble.start,
                "count": session.ensemble.count,
                "horizon": session.ensemble.horizon,
                "seed": session.ensemble.seed,
                "cursor": session.ensemble.cursor,
            }

    @app.get("/session/{session_id}/agents")
    def get_agents(session_id: str):
        session = get_session(session_id)
        with session.lock:
            if session.ensemble is None:
                return {"spawned": False}
            return {
                "spawned": True,
                "start": session.ensemble.start,
                "count": session.ensemble.count,
                "horizon": session.ensemble.horizon,
                "seed": session.ensemble.seed,
                "cursor": session.ensemble.cursor,
                "single_agent": list(single_agent(session.ensemble)),
            }

    @app.get("/session/{session_id}/agents/occupancy")
    def get_occupancy(session_id: str, t: int | None = None):
        session = get_session(session_id)
        with session.lock:
            if session.ensemble is None:
                raise CursorOutOfRange("no agents spawned yet")
            step = session.ensemble.cursor if t is None else t
            counts = occupancy(session.ensemble, step)
            return {
                "t": step,
                "counts": {
                    node_id: int(c)
                    for node_id, c in zip(session.ensemble.order, counts)
                    if c
                },
                "total": int(counts.sum()),
            }

    @app.post("/session/{session_id}/layout/step")
    def layout_step(session_id: str, body: dict = Body(default={})):
        session = get_session(session_id)
        with session.lock:
            graph = session.graph_for(session.view)
            converged = None
            if body.get("converge"):
                session.layout, converged = run_until_converged(
                    session.layout,
                    graph,
                    session.params,
                    tol=float(body.get("tol", 1e-3)),
                    max_iter=int(body.get("max_iter", 2000)),
                )
            else:
                for _ in range(int(body.get("iterations", 1))):
                    session.layout = step_layout(session.layout, graph, session.params)
            return {
                "revision": session.bump(),
                "iteration": session.layout.iteration,
                "converged": converged,
                "positions": _positions_payload(session.layout),
            }

    return app


def _positions_payload(layout: LayoutState) -> list[dict]:
    return [
        {
            "kind": ref.kind,
            "id": ref.id,
            "x": float(layout.positions[i, 0]),
            "y": float(layout.positions[i, 1]),
        }
        for i, ref in enumerate(layout.order)
    ]


def _graph_payload(session: Session) -> dict:
    view = session.view
    graph = session.graph_for(view)
    report = session.report_for(view)
    masses = (
        aggregate_stationary(session.pi, view, session.strategy)
        if session.pi is not None
        else {}
    )
    node_mass = session.pi.by_node if session.pi is not None else {}
    position = {
        ref: [float(x), float(y)]
        for ref, (x, y) in zip(session.layout.order, session.layout.positions)
    }

    locations = []
    for loc in session.strategy.locations:
        ref = ElementRef(kind=LOCATION, id=loc.id)
        is_open = loc.id in view.open_locations
        loc_mass = sum(node_mass.get(m, 0.0) for m in loc.member_nodes)
        locations.append(
            {
                "id": loc.id,
                "label": loc.label,
                "open": is_open,
                "position": position[ref],
                "members": list(loc.member_nodes),
                "mass": loc_mass if session.pi is not None else None,
                "on_loop": None if is_open else report.on_loop[ref],
            }
        )

    nodes = []
    for node in session.strategy.nodes:
        ref = ElementRef(kind=NODE, id=node.id)
        is_element = node.location in view.open_locations
        nodes.append(
            {
                "id": node.id,
                "location": node.location,
                "position": position[ref],
                "mass": node_mass.get(node.id) if session.pi is not None else None,
                "on_loop": report.on_loop[ref] if is_element else None,
            }
        )

    surviving = set(report.surviving_edges)
    edges = [
        {
            "source": e.source.as_dict(),
            "target": e.target.as_dict(),
            "weight": e.weight,
            "display_weight": display_weight(e, view.display_mode),
            "flow": e.flow,
            "rel_flow": e.rel_flow,
            "internal": e.internal,
            "surviving": e in surviving,
        }
        for e in graph.edges
    ]

    return {
        "revision": session.revision,
        "name": session.strategy.name,
        "view": {
            "open_locations": sorted(view.open_locations),
            "rule": view.rule,
            "threshold": view.threshold,
            "display_mode": view.display_mode,
        },
        "stationary_available": session.pi is not None,
        "element_mass": {
            f"{ref.kind}:{ref.id}": value for ref, value in masses.items()
        },
        "locations": locations,
        "nodes": nodes,
        "edges": edges,
        "abandoned": [ref.as_dict() for ref in report.abandoned],
    }
