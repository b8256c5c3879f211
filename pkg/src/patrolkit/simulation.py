"""Seeded ensembles of simulated patrol agents with precomputed paths.

Paths are sampled with the Philox counter-based generator, one stream per
agent keyed by (seed, agent index), so results are reproducible bit for
bit across runs and platforms and independent of generation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CursorOutOfRange, UnknownReference
from .model import Strategy, to_matrix

_MASK64 = 2**64 - 1


@dataclass
class AgentEnsemble:
    start: str
    count: int
    horizon: int
    seed: int
    order: tuple[str, ...]
    #: (count, horizon + 1) node indices into ``order``; read-only
    paths: np.ndarray
    #: shared time cursor; selects a step, never mutates the paths
    cursor: int = 0

    def __post_init__(self):
        arr = np.asarray(self.paths)
        arr.flags.writeable = False
        self.paths = arr


def spawn_agents(
    strategy: Strategy,
    start: str,
    count: int = 400,
    horizon: int = 100,
    seed: int = 0,
) -> AgentEnsemble:
    """Sample ``count`` independent paths of ``horizon`` steps from ``start``."""
    if start not in strategy.node_index:
        raise UnknownReference(f"unknown start node {start!r}")
    if count < 1:
        raise ValueError("count must be >= 1")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")

    matrix = to_matrix(strategy)
    cum = np.cumsum(matrix.entries, axis=1)
    # pin the last positive entry of every row to exactly 1 so a uniform
    # draw in [0, 1) can never fall off the end
    cum /= cum[:, -1:]

    draws = np.empty((count, horizon))
    for agent in range(count):
        key = np.array([seed & _MASK64, agent], dtype=np.uint64)
        rng = np.random.Generator(np.random.Philox(key=key))
        draws[agent] = rng.random(horizon)

    paths = np.empty((count, horizon + 1), dtype=np.int64)
    current = np.full(count, strategy.node_index[start], dtype=np.int64)
    paths[:, 0] = current
    for t in range(horizon):
        # first index whose cumulative probability exceeds the draw;
        # zero-probability columns have zero-width intervals and are
        # never selected
        current = (cum[current] <= draws[:, t : t + 1]).sum(axis=1)
        paths[:, t + 1] = current

    return AgentEnsemble(
        start=start,
        count=count,
        horizon=horizon,
        seed=seed,
        order=strategy.node_ids,
        paths=paths,
    )


def occupancy(ensemble: AgentEnsemble, t: int) -> np.ndarray:
    """Agent counts per node at step t; always sums to the agent count."""
    if not 0 <= t <= ensemble.horizon:
        raise CursorOutOfRange(
            f"step {t} outside [0, {ensemble.horizon}]"
        )
    return np.bincount(ensemble.paths[:, t], minlength=len(ensemble.order))


def single_agent(ensemble: AgentEnsemble) -> tuple[str, ...]:
    """Agent 0's full path, for single-patrol replay."""
    return tuple(ensemble.order[i] for i in ensemble.paths[0])
