"""Tabular Q-learning with epsilon-greedy selection.

One table per learning session; concurrent experiments own independent tables
and independently seeded generators.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import pomdp
from .levels import KnowledgeLevel
from .sentiment import SentimentClass

CHECKPOINT_HEADER = ["state_id", "action_id", "value"]
CHECKPOINT_VERSION = "qtable-v1"


@dataclass(frozen=True)
class QConfig:
    """Learner hyperparameters.

    The learning-rate default follows the conservative production setting;
    desk-scale experiments override it (0.001 cannot converge in a few
    thousand episodes). The discount must stay below 1 for convergence.
    """

    alpha: float = 0.001
    gamma: float = 0.9
    epsilon0: float = 1.0
    epsilon_decay: float = 0.995
    epsilon_min: float = 0.01
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha {self.alpha} outside (0, 1]")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma {self.gamma} outside [0, 1)")
        if not 0.0 <= self.epsilon0 <= 1.0:
            raise ValueError(f"epsilon0 {self.epsilon0} outside [0, 1]")
        if not 0.0 < self.epsilon_decay <= 1.0:
            raise ValueError(f"epsilon_decay {self.epsilon_decay} outside (0, 1]")
        if not 0.0 <= self.epsilon_min <= 1.0:
            raise ValueError(f"epsilon_min {self.epsilon_min} outside [0, 1]")
        if self.epsilon_min > self.epsilon0:
            raise ValueError("epsilon_min must not exceed epsilon0")


class QTable:
    """Dense Q(s, a) value table, zero-initialized."""

    def __init__(self, n_states: int, n_actions: int):
        if n_states <= 0 or n_actions <= 0:
            raise ValueError("table dimensions must be positive")
        self.values = np.zeros((n_states, n_actions))

    @property
    def n_states(self) -> int:
        return self.values.shape[0]

    @property
    def n_actions(self) -> int:
        return self.values.shape[1]

    def save(self, path: str | Path) -> None:
        """Plain-text checkpoint for inspection and warm starts."""
        path = Path(path)
        with path.open("w", newline="", encoding="utf-8") as fp:
            fp.write(f"# {CHECKPOINT_VERSION} states={self.n_states} actions={self.n_actions}\n")
            writer = csv.writer(fp)
            writer.writerow(CHECKPOINT_HEADER)
            for s in range(self.n_states):
                for a in range(self.n_actions):
                    writer.writerow([s, a, repr(float(self.values[s, a]))])

    @classmethod
    def load(cls, path: str | Path) -> "QTable":
        path = Path(path)
        with path.open(encoding="utf-8") as fp:
            banner = fp.readline().strip()
            if not banner.startswith(f"# {CHECKPOINT_VERSION}"):
                raise ValueError(f"unrecognized checkpoint header: {banner!r}")
            meta = dict(part.split("=") for part in banner.split()[2:])
            table = cls(int(meta["states"]), int(meta["actions"]))
            reader = csv.reader(fp)
            header = next(reader)
            if header != CHECKPOINT_HEADER:
                raise ValueError(f"unexpected column header: {header!r}")
            for state_id, action_id, value in reader:
                table.values[int(state_id), int(action_id)] = float(value)
        return table


def choose_action(
    q: QTable,
    state: int,
    epsilon: float,
    rng: np.random.Generator,
    valid_actions: Optional[Sequence[int]] = None,
) -> int:
    """Epsilon-greedy over the given action subset (all actions by default).

    Greedy ties break to the lowest action id so replays are deterministic.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon {epsilon} outside [0, 1]")
    actions = list(range(q.n_actions)) if valid_actions is None else sorted(valid_actions)
    if not actions:
        raise ValueError("no valid actions")
    if epsilon > 0.0 and rng.random() < epsilon:
        return actions[int(rng.integers(len(actions)))]
    row = q.values[state]
    best = actions[0]
    for a in actions[1:]:
        if row[a] > row[best]:
            best = a
    return best


def update_q(
    q: QTable,
    state: int,
    action: int,
    reward: float,
    next_state: int,
    cfg: QConfig,
    terminal: bool = False,
) -> QTable:
    """One temporal-difference step; only the (state, action) cell changes.

    Q(s,a) <- Q(s,a) + alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)),
    with the bootstrap term dropped on terminal transitions.
    """
    bootstrap = 0.0 if terminal else float(np.max(q.values[next_state]))
    td_error = reward + cfg.gamma * bootstrap - q.values[state, action]
    q.values[state, action] += cfg.alpha * td_error
    return q


def epsilon_after(cfg: QConfig, episodes: int) -> float:
    """Exploration rate after the given number of completed episodes."""
    return max(cfg.epsilon_min, cfg.epsilon0 * cfg.epsilon_decay**episodes)


def episode_return(rewards: Sequence[float], gamma: float) -> float:
    """Discounted return of one episode's reward sequence."""
    return pomdp.discounted_return(rewards, gamma)


def encode_state(
    position: int,
    level: KnowledgeLevel,
    sentiment_class: SentimentClass,
    n_positions: int,
) -> int:
    """Bijective composite id for (dialogue position, level, sentiment)."""
    if not 0 <= position < n_positions:
        raise ValueError(f"position {position} outside [0, {n_positions})")
    return (position * len(KnowledgeLevel) + int(level)) * len(SentimentClass) + int(
        sentiment_class
    )


def decode_state(state: int, n_positions: int) -> tuple[int, KnowledgeLevel, SentimentClass]:
    sentiment = SentimentClass(state % len(SentimentClass))
    rest = state // len(SentimentClass)
    level = KnowledgeLevel(rest % len(KnowledgeLevel))
    position = rest // len(KnowledgeLevel)
    if not 0 <= position < n_positions:
        raise ValueError(f"state {state} outside the table for {n_positions} positions")
    return position, level, sentiment


def state_space_size(n_positions: int) -> int:
    return n_positions * len(KnowledgeLevel) * len(SentimentClass)
