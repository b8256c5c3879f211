import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from patrolkit.fixtures import airport, inner_loop, office, three_rooms
from patrolkit.model import generate_corridor, serialize_strategy

THREE_ROOMS_DOC = {
    "name": "three-rooms",
    "locations": [
        {"id": "L0", "label": "Room 0"},
        {"id": "L1", "label": "Room 1"},
        {"id": "L2", "label": "Room 2"},
    ],
    "nodes": [
        {"id": "r0", "location": "L0"},
        {"id": "r1", "location": "L1"},
        {"id": "r2", "location": "L2"},
    ],
    "edges": [
        {"from": "r0", "to": "r1", "p": 1.0},
        {"from": "r1", "to": "r1", "p": 0.6666666666666666},
        {"from": "r1", "to": "r2", "p": 0.3333333333333333},
        {"from": "r2", "to": "r0", "p": 0.5},
        {"from": "r2", "to": "r1", "p": 0.5},
    ],
}


@pytest.fixture
def three_rooms_doc() -> str:
    return json.dumps(THREE_ROOMS_DOC)


@pytest.fixture
def three_rooms_strategy():
    return three_rooms()


@pytest.fixture
def airport_strategy():
    return airport()


@pytest.fixture
def inner_loop_strategy():
    return inner_loop()


@pytest.fixture
def office_strategy():
    return office()


def all_fixture_strategies():
    return [
        three_rooms(),
        airport(),
        inner_loop(),
        office(),
        generate_corridor(2),
        generate_corridor(4),
        generate_corridor(2, with_memory=True),
        generate_corridor(4, with_memory=True),
    ]


@pytest.fixture
def strategy_file(tmp_path):
    """Factory writing a strategy (or raw text) to a temp file."""

    def write(strategy_or_text, name="strategy.json"):
        path = tmp_path / name
        if isinstance(strategy_or_text, str):
            path.write_text(strategy_or_text)
        else:
            path.write_text(serialize_strategy(strategy_or_text))
        return str(path)

    return write
