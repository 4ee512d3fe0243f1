"""Append-only belief-state history with constraint validation and rollback.

The planner consumes the union of the current belief and the full ordered
prior sequence; the trend module consumes a scalarized view of the same
series. A failed validation never touches committed entries; the effective
belief simply rolls back to the last committed one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from .pomdp import Belief


@dataclass(frozen=True)
class ValidationRule:
    """Deterministic, side-effect-free predicate over a belief transition."""

    description: str
    predicate: Callable[[Belief, Belief, Optional[int]], bool]

    def check(self, previous: Belief, candidate: Belief, observation: Optional[int]) -> bool:
        return bool(self.predicate(previous, candidate, observation))


@dataclass(frozen=True)
class HistoryEntry:
    turn: int
    belief: Belief
    action: Optional[int]
    observation: Optional[int]
    accepted: bool = True


class BeliefHistory:
    """One per session; mutated only by the owning session's logical thread."""

    def __init__(self, initial_belief: Belief):
        self._entries: list[HistoryEntry] = [
            HistoryEntry(turn=0, belief=initial_belief, action=None, observation=None)
        ]

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> tuple[HistoryEntry, ...]:
        return tuple(self._entries)

    @property
    def committed_len(self) -> int:
        return len(self._entries)

    def current(self) -> Belief:
        return self._entries[-1].belief

    def append(
        self,
        belief: Belief,
        action: Optional[int],
        observation: Optional[int],
        accepted: bool = True,
    ) -> "BeliefHistory":
        """Commit one entry; prior entries are never altered."""
        self._entries.append(
            HistoryEntry(
                turn=len(self._entries),
                belief=belief,
                action=action,
                observation=observation,
                accepted=accepted,
            )
        )
        return self

    def validate_or_rollback(
        self,
        rules: Iterable[ValidationRule],
        candidate: Belief,
        observation: Optional[int],
    ) -> tuple[bool, Belief]:
        """Accept the candidate if every rule passes, else roll back.

        Rollback is a defined outcome, not an error: the effective belief is
        the last committed one and nothing is mutated either way.
        """
        previous = self.current()
        for rule in rules:
            if not rule.check(previous, candidate, observation):
                return False, previous
        return True, candidate

    def planning_view(self) -> tuple[Belief, list[Belief]]:
        """Latest committed belief plus the ordered prior history."""
        return self.current(), [entry.belief for entry in self._entries[:-1]]

    def scalar_series(self) -> np.ndarray:
        """One scalar per turn: the confidence in the top hypothesis."""
        return np.array([float(np.max(e.belief.probs)) for e in self._entries])

    def to_jsonl(self) -> str:
        """Transcript log, one JSON line per turn."""
        lines = []
        for e in self._entries:
            lines.append(
                json.dumps(
                    {
                        "turn": e.turn,
                        "belief_scalar": float(np.max(e.belief.probs)),
                        "belief": [float(p) for p in e.belief.probs],
                        "action": e.action,
                        "observation": e.observation,
                        "accepted": e.accepted,
                    }
                )
            )
        return "\n".join(lines) + "\n"
