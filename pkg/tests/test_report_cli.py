import json
import subprocess
import sys

import pytest

from patrolkit.cli import main
from patrolkit.fixtures import inner_loop, three_rooms
from patrolkit.model import generate_corridor
from patrolkit.report import build_report

SINGLE_NODE_DOC = json.dumps(
    {
        "name": "solo",
        "locations": [{"id": "L", "label": "Lone room"}],
        "nodes": [{"id": "n", "location": "L"}],
        "edges": [{"from": "n", "to": "n", "p": 1.0}],
    }
)

TWO_ISLANDS_DOC = json.dumps(
    {
        "name": "two-islands",
        "locations": [{"id": "L", "label": "L"}],
        "nodes": [
            {"id": "a", "location": "L"},
            {"id": "b", "location": "L"},
            {"id": "c", "location": "L"},
            {"id": "d", "location": "L"},
        ],
        "edges": [
            {"from": "a", "to": "b", "p": 1.0},
            {"from": "b", "to": "a", "p": 1.0},
            {"from": "c", "to": "d", "p": 1.0},
            {"from": "d", "to": "c", "p": 1.0},
        ],
    }
)

BAD_ROW_DOC = json.dumps(
    {
        "name": "bad",
        "locations": [{"id": "L", "label": "L"}],
        "nodes": [{"id": "n0", "location": "L"}],
        "edges": [{"from": "n0", "to": "n0", "p": 0.99}],
    }
)


class TestReport:
    def test_three_rooms_stationary_rendering(self, three_rooms_strategy):
        report = build_report(three_rooms_strategy)
        assert report["stationary"]["mass"] == [0.111111111, 0.666666667, 0.222222222]
        assert report["warnings"] == []

    def test_corridor_hitting_table_end_to_end(self):
        report = build_report(generate_corridor(4))
        order = report["hitting_time"]["order"]
        steps = report["hitting_time"]["steps"]
        assert steps[order.index("n0")][order.index("n5")] == 25.0

    def test_inner_loop_sweep_first_break(self):
        report = build_report(inner_loop())
        sweep = report["loop_break_sweep"]
        assert sweep[0]["threshold"] == 0.001
        assert {entry["id"] for entry in sweep[0]["abandoned"]} == {
            "outer_0_n",
            "outer_1_n",
            "outer_2_n",
            "outer_3_n",
        }

    def test_mixing_summary_shape(self, three_rooms_strategy):
        report = build_report(three_rooms_strategy)
        by_node = {m["node"]: m for m in report["mixing"]}
        assert set(by_node) == {"r0", "r1", "r2"}
        assert by_node["r0"]["steps_to_mix"] is not None
        assert by_node["r0"]["tv_final"] < 0.01

    def test_report_is_deterministic(self, three_rooms_strategy):
        assert build_report(three_rooms_strategy) == build_report(three_rooms_strategy)


class TestCliValidate:
    def test_valid_file(self, strategy_file, capsys):
        path = strategy_file(three_rooms())
        assert main(["validate", path]) == 0
        out = capsys.readouterr().out
        assert "3 locations" in out

    def test_missing_file_is_io_error(self, capsys):
        assert main(["validate", "/definitely/not/here.json"]) == 1
        diag = json.loads(capsys.readouterr().err.strip())
        assert diag["code"] == "io_error"

    def test_non_stochastic_names_node_and_sum(self, strategy_file, capsys):
        path = strategy_file(BAD_ROW_DOC)
        assert main(["validate", path]) == 2
        diag = json.loads(capsys.readouterr().err.strip())
        assert diag["code"] == "row_not_stochastic"
        assert diag["node"] == "n0"
        assert diag["sum"] == pytest.approx(0.99)

    def test_malformed_document(self, strategy_file, capsys):
        path = strategy_file("{broken")
        assert main(["validate", path]) == 2
        diag = json.loads(capsys.readouterr().err.strip())
        assert diag["code"] == "malformed_document"

    def test_reducible_file_warns_but_passes(self, strategy_file, capsys):
        path = strategy_file(TWO_ISLANDS_DOC)
        assert main(["validate", path]) == 0
        captured = capsys.readouterr()
        diag = json.loads(captured.err.strip())
        assert diag["code"] == "not_irreducible_warning"
        assert "OK" in captured.out


class TestCliAnalyze:
    def test_byte_identical_reports(self, strategy_file, tmp_path):
        path = strategy_file(three_rooms())
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        assert main(["analyze", path, "--report", str(out1)]) == 0
        assert main(["analyze", path, "--report", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_byte_identical_across_processes(self, strategy_file):
        path = strategy_file(three_rooms())
        runs = [
            subprocess.run(
                [sys.executable, "-m", "patrolkit.cli", "analyze", path],
                capture_output=True,
                check=True,
            ).stdout
            for _ in range(2)
        ]
        assert runs[0] == runs[1]

    def test_multiple_closed_components_is_an_analysis_failure(self, strategy_file, capsys):
        path = strategy_file(TWO_ISLANDS_DOC)
        assert main(["analyze", path]) == 3
        diag = json.loads(capsys.readouterr().err.strip())
        assert diag["code"] == "not_irreducible"

    def test_seed_is_echoed(self, strategy_file, capsys):
        path = strategy_file(three_rooms())
        assert main(["analyze", path, "--seed", "321"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["seed"] == 321


class TestCliSimulate:
    def test_deterministic_cycle_moves_a_point_mass(self, strategy_file, capsys):
        path = strategy_file(generate_corridor(1, with_memory=True))
        assert main(
            ["simulate", path, "--start", "n0", "--count", "25", "--horizon", "6",
             "--seed", "4"]
        ) == 0
        trace = json.loads(capsys.readouterr().out)
        for counts in trace["occupancy"]:
            assert sorted(counts) == [0, 0, 0, 25]

    def test_repeatable_trace(self, strategy_file, capsys):
        path = strategy_file(three_rooms())
        args = ["simulate", path, "--start", "r0", "--count", "100", "--horizon", "20",
                "--seed", "11"]
        assert main(args) == 0
        first = capsys.readouterr().out
        assert main(args) == 0
        second = capsys.readouterr().out
        assert first == second

    def test_unknown_start(self, strategy_file, capsys):
        path = strategy_file(three_rooms())
        assert main(["simulate", path, "--start", "zz", "--seed", "1"]) == 2
        diag = json.loads(capsys.readouterr().err.strip())
        assert diag["code"] == "unknown_reference"

    def test_omitted_seed_is_drawn_and_echoed(self, strategy_file, capsys):
        path = strategy_file(three_rooms())
        assert main(["simulate", path, "--start", "r0", "--count", "5",
                     "--horizon", "3"]) == 0
        trace = json.loads(capsys.readouterr().out)
        assert isinstance(trace["seed"], int)


class TestCliSweepLayoutDot:
    def test_sweep_lists_inner_loop_break(self, strategy_file, capsys):
        path = strategy_file(inner_loop())
        assert main(["sweep", path]) == 0
        table = json.loads(capsys.readouterr().out)
        assert table["breaks"][0]["threshold"] == 0.001

    def test_layout_same_seed_same_document(self, strategy_file, capsys):
        path = strategy_file(three_rooms())
        args = ["layout", path, "--seed", "5", "--max-iter", "300"]
        assert main(args) == 0
        first = capsys.readouterr().out
        assert main(args) == 0
        assert capsys.readouterr().out == first

    def test_dot_export_clusters_and_self_edge(self, strategy_file, capsys):
        path = strategy_file(generate_corridor(2, with_memory=True))
        assert main(["export-dot", path]) == 0
        dot = capsys.readouterr().out
        assert dot.count("subgraph cluster_") == 4

        solo = strategy_file(SINGLE_NODE_DOC, name="solo.json")
        assert main(["export-dot", solo]) == 0
        dot = capsys.readouterr().out
        assert '"n" -> "n" [label="1.0"]' in dot
