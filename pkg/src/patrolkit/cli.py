"""Command-line interface.

Exit codes: 0 success, 1 I/O failure, 2 validation failure, 3 analysis
failure. Diagnostics go to stderr as JSON lines with stable ``code``
fields; regular output goes to stdout (or the file named by --report).
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys

from .aggregation import ViewState, build_view
from .errors import NoConvergence, NotIrreducible, PatrolError
from .layout import LayoutParams, init_layout, run_until_converged
from .model import Strategy, parse_strategy, validation_warnings
from .reachability import loop_break_sweep
from .report import build_report, round9
from .simulation import occupancy, spawn_agents

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_ANALYSIS = 3

PORT_ENV_VAR = "PATROLKIT_PORT"
DEFAULT_PORT = 8000


def _diagnostic(code: str, message: str, **detail) -> None:
    payload = {"code": code, "message": message}
    payload.update(detail)
    print(json.dumps(payload), file=sys.stderr)


def _load(path: str) -> Strategy:
    try:
        with open(path, encoding="utf-8") as handle:
            document = handle.read()
    except OSError as exc:
        _diagnostic("io_error", str(exc), path=path)
        raise SystemExit(EXIT_IO) from exc
    try:
        return parse_strategy(document)
    except PatrolError as exc:
        detail = {}
        if hasattr(exc, "node_id"):
            detail = {"node": exc.node_id, "sum": exc.total}
        _diagnostic(exc.code, str(exc), **detail)
        raise SystemExit(EXIT_VALIDATION) from exc


def _emit(document: dict, out_path: str | None) -> None:
    text = json.dumps(document, indent=2) + "\n"
    if out_path:
        try:
            with open(out_path, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as exc:
            _diagnostic("io_error", str(exc), path=out_path)
            raise SystemExit(EXIT_IO) from exc
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    strategy = _load(args.file)
    for warning in validation_warnings(strategy):
        _diagnostic("not_irreducible_warning", warning)
    print(
        f"OK: {strategy.name!r} with {len(strategy.locations)} locations, "
        f"{len(strategy.nodes)} memory nodes, {len(strategy.edges)} edges"
    )
    return EXIT_OK


def cmd_analyze(args) -> int:
    strategy = _load(args.file)
    try:
        report = build_report(strategy, seed=args.seed)
    except (NotIrreducible, NoConvergence) as exc:
        _diagnostic(exc.code, str(exc))
        return EXIT_ANALYSIS
    _emit(report, args.report)
    return EXIT_OK


def cmd_simulate(args) -> int:
    strategy = _load(args.file)
    seed = args.seed if args.seed is not None else secrets.randbelow(2**63)
    try:
        ensemble = spawn_agents(
            strategy, args.start, count=args.count, horizon=args.horizon, seed=seed
        )
    except PatrolError as exc:
        _diagnostic(exc.code, str(exc))
        return EXIT_VALIDATION
    trace = [occupancy(ensemble, t).tolist() for t in range(args.horizon + 1)]
    _emit(
        {
            "start": args.start,
            "count": args.count,
            "horizon": args.horizon,
            "seed": seed,
            "order": list(ensemble.order),
            "occupancy": trace,
        },
        args.report,
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    strategy = _load(args.file)
    view = ViewState(open_locations=frozenset(loc.id for loc in strategy.locations))
    breaks = loop_break_sweep(build_view(strategy, view))
    _emit(
        {
            "strategy": strategy.name,
            "breaks": [
                {
                    "threshold": round9(tau),
                    "abandoned": [ref.as_dict() for ref in newly],
                }
                for tau, newly in breaks
            ],
        },
        args.report,
    )
    return EXIT_OK


def cmd_layout(args) -> int:
    strategy = _load(args.file)
    seed = args.seed if args.seed is not None else secrets.randbelow(2**63)
    params = LayoutParams(seed=seed)
    view = build_view(strategy, ViewState())
    state, converged = run_until_converged(
        init_layout(view, params), view, params, max_iter=args.max_iter
    )
    _emit(
        {
            "strategy": strategy.name,
            "seed": seed,
            "iterations": state.iteration,
            "converged": converged,
            "positions": [
                {
                    "kind": ref.kind,
                    "id": ref.id,
                    "x": round9(float(state.positions[i, 0])),
                    "y": round9(float(state.positions[i, 1])),
                }
                for i, ref in enumerate(state.order)
            ],
        },
        args.report,
    )
    return EXIT_OK


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def cmd_export_dot(args) -> int:
    strategy = _load(args.file)
    lines = [f"digraph {_dot_quote(strategy.name)} {{"]
    for index, loc in enumerate(strategy.locations):
        lines.append(f"  subgraph cluster_{index} {{")
        lines.append(f"    label={_dot_quote(loc.label)};")
        for node_id in loc.member_nodes:
            lines.append(f"    {_dot_quote(node_id)};")
        lines.append("  }")
    for e in strategy.edges:
        lines.append(
            f"  {_dot_quote(e.source)} -> {_dot_quote(e.target)} "
            f"[label={_dot_quote(str(e.p))}];"
        )
    lines.append("}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host="127.0.0.1", port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patrolkit",
        description="Analyze, simulate and serve randomized patrolling strategies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a strategy file")
    p.add_argument("file")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("analyze", help="write the full analysis report")
    p.add_argument("file")
    p.add_argument("--report", help="write the report to this path instead of stdout")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("simulate", help="run a seeded agent ensemble")
    p.add_argument("file")
    p.add_argument("--start", required=True, help="start memory node id")
    p.add_argument("--count", type=int, default=400)
    p.add_argument("--horizon", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--report", help="write the trace to this path instead of stdout")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("sweep", help="list thresholds at which patrol loops break")
    p.add_argument("file")
    p.add_argument("--report")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("layout", help="compute converged 2-D positions")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--report")
    p.set_defaults(handler=cmd_layout)

    p = sub.add_parser("export-dot", help="emit the strategy in DOT syntax")
    p.add_argument("file")
    p.set_defaults(handler=cmd_export_dot)

    p = sub.add_parser("serve", help="run the local session service")
    p.add_argument(
        "--port",
        type=int,
        default=int(os.environ.get(PORT_ENV_VAR, DEFAULT_PORT)),
    )
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
