"""Dialogue-level POMDP model: exact belief updates and discounted returns.

The model is a 7-tuple (states, actions, transition, reward, observations,
observation probabilities, discount). Everything is stored dense because the
state spaces this engine works with are tiny (a handful of user intentions).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateObservation, ModelError, OutOfRange

# Probability rows may be off by this much in a model file; they are
# renormalized exactly after validation.
ROW_SUM_TOL = 1e-9

StateId = int
ActionId = int
ObservationId = int

# Maps a belief to the action to take. The associated value function lives
# only in test oracles; production policies come from the Q table.
PolicyFn = Callable[["Belief"], ActionId]


@dataclass(frozen=True)
class Belief:
    """Probability distribution over hidden states."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", probs)
        if probs.ndim != 1:
            raise ModelError("belief must be a vector")
        if np.any(probs < 0):
            raise ModelError("belief has negative entries")
        total = probs.sum()
        if abs(total - 1.0) > ROW_SUM_TOL:
            raise ModelError(f"belief sums to {total}, expected 1")

    @classmethod
    def uniform(cls, n: int) -> "Belief":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def point_mass(cls, n: int, state: StateId) -> "Belief":
        probs = np.zeros(n)
        probs[state] = 1.0
        return cls(probs)

    def top(self) -> tuple[StateId, float]:
        """Index and probability of the most likely state."""
        idx = int(np.argmax(self.probs))
        return idx, float(self.probs[idx])


@dataclass(frozen=True)
class PomdpModel:
    """Immutable dialogue POMDP. Safe to share across threads.

    transition[s, a, s'] = P(s' | s, a)
    observation[s', a, o] = P(o | s', a)
    reward[s, a, s'] is an arbitrary real tensor (zeros when unused).
    """

    states: tuple[str, ...]
    actions: tuple[str, ...]
    observations: tuple[str, ...]
    transition: np.ndarray
    observation: np.ndarray
    discount: float
    reward: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        n_s, n_a, n_o = len(self.states), len(self.actions), len(self.observations)
        t = np.asarray(self.transition, dtype=float)
        z = np.asarray(self.observation, dtype=float)
        r = self.reward
        r = np.zeros((n_s, n_a, n_s)) if r is None else np.asarray(r, dtype=float)
        if t.shape != (n_s, n_a, n_s):
            raise ModelError(f"transition tensor shape {t.shape} != {(n_s, n_a, n_s)}")
        if z.shape != (n_s, n_a, n_o):
            raise ModelError(f"observation tensor shape {z.shape} != {(n_s, n_a, n_o)}")
        if r.shape != (n_s, n_a, n_s):
            raise ModelError(f"reward tensor shape {r.shape} != {(n_s, n_a, n_s)}")
        if np.any(t < 0) or np.any(z < 0):
            raise ModelError("probabilities must be non-negative")
        # Convergence of the learner requires discount < 1, so the loader is
        # stricter than the general MDP definition.
        if not 0.0 <= self.discount < 1.0:
            raise ModelError(f"discount {self.discount} outside [0, 1)")
        for a in range(n_a):
            for s in range(n_s):
                row = t[s, a]
                if abs(row.sum() - 1.0) > ROW_SUM_TOL:
                    raise ModelError(
                        f"transition row (state={self.states[s]}, action={self.actions[a]}) "
                        f"sums to {row.sum()}"
                    )
            for s2 in range(n_s):
                row = z[s2, a]
                if abs(row.sum() - 1.0) > ROW_SUM_TOL:
                    raise ModelError(
                        f"observation row (state={self.states[s2]}, action={self.actions[a]}) "
                        f"sums to {row.sum()}"
                    )
        # Renormalize exactly so downstream sums are clean.
        t = t / t.sum(axis=2, keepdims=True)
        z = z / z.sum(axis=2, keepdims=True)
        object.__setattr__(self, "transition", t)
        object.__setattr__(self, "observation", z)
        object.__setattr__(self, "reward", r)
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "observations", tuple(self.observations))

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    @property
    def n_observations(self) -> int:
        return len(self.observations)

    def initial_belief(self, state: str | StateId | None = None) -> Belief:
        """Point mass on the given state, or uniform when none is given."""
        if state is None:
            return Belief.uniform(self.n_states)
        if isinstance(state, str):
            state = self.states.index(state)
        return Belief.point_mass(self.n_states, state)


def load_model(source: str | Path | dict) -> PomdpModel:
    """Load a model from a JSON document.

    The file names its state/action/observation sets and stores one
    probability table per action, one row per (source or next) state:

        {"states": [...], "actions": [...], "observations": [...],
         "discount": 0.9,
         "transition": {action: [[P(s'|s,a) ...] per s]},
         "observation": {action: [[P(o|s',a) ...] per s']},
         "reward": {action: [[R(s,a,s') ...] per s]}}   # optional

    Rows violating the simplex constraints are rejected.
    """
    if isinstance(source, dict):
        doc = source
    else:
        doc = json.loads(Path(source).read_text(encoding="utf-8"))
    try:
        states = list(doc["states"])
        actions = list(doc["actions"])
        observations = list(doc["observations"])
        discount = float(doc["discount"])
    except KeyError as exc:
        raise ModelError(f"model file missing key: {exc}") from exc

    def tables_to_tensor(tables: dict, n_rows: int, n_cols: int, what: str) -> np.ndarray:
        tensor = np.zeros((n_rows, len(actions), n_cols))
        for a, name in enumerate(actions):
            if name not in tables:
                raise ModelError(f"{what} table missing action {name!r}")
            rows = np.asarray(tables[name], dtype=float)
            if rows.shape != (n_rows, n_cols):
                raise ModelError(f"{what} table for {name!r} has shape {rows.shape}")
            tensor[:, a, :] = rows
        return tensor

    n_s, n_o = len(states), len(observations)
    transition = tables_to_tensor(doc.get("transition", {}), n_s, n_s, "transition")
    observation = tables_to_tensor(doc.get("observation", {}), n_s, n_o, "observation")
    reward = None
    if doc.get("reward"):
        reward = tables_to_tensor(doc["reward"], n_s, n_s, "reward")
    return PomdpModel(
        states=tuple(states),
        actions=tuple(actions),
        observations=tuple(observations),
        transition=transition,
        observation=observation,
        discount=discount,
        reward=reward,
    )


def predict(model: PomdpModel, b: Belief, a: ActionId) -> np.ndarray:
    """One-step predicted state distribution: sum_s T(s'|s,a) b(s)."""
    return model.transition[:, a, :].T @ b.probs


def observation_likelihood(
    model: PomdpModel, b: Belief, a: ActionId, o: ObservationId
) -> float:
    """Pr(o | b, a), the belief-update normalizer."""
    return float(model.observation[:, a, o] @ predict(model, b, a))


def update_belief(
    model: PomdpModel, b: Belief, a: ActionId, o: ObservationId
) -> Belief:
    """Bayesian belief update b'(s') = eta * O(o|s',a) * sum_s T(s'|s,a) b(s).

    Raises DegenerateObservation when Pr(o|b,a) is zero; the caller decides
    how to recover (the engine rolls back to the previous committed belief).
    """
    unnormalized = model.observation[:, a, o] * predict(model, b, a)
    total = unnormalized.sum()
    if total <= 0.0:
        raise DegenerateObservation(
            f"observation {model.observations[o]!r} has zero likelihood under the model"
        )
    return Belief(unnormalized / total)


def discounted_return(rewards: Sequence[float], gamma: float) -> float:
    """sum_t gamma^t * rewards[t] over a finite horizon."""
    if not 0.0 <= gamma <= 1.0:
        raise OutOfRange(f"gamma {gamma} outside [0, 1]")
    total = 0.0
    weight = 1.0
    for r in rewards:
        total += weight * r
        weight *= gamma
    return total
