"""User knowledge classification and the matching contextual control mode."""

from __future__ import annotations

from enum import IntEnum

from .errors import OutOfRange


class KnowledgeLevel(IntEnum):
    EXPERT = 0
    PROFESSIONAL = 1
    AMATEUR = 2
    NOVICE = 3

    @property
    def label(self) -> str:
        return self.name.lower()


class ControlMode(IntEnum):
    STRATEGIC = 0
    TACTICAL = 1
    OPPORTUNISTIC = 2
    SCRAMBLED = 3

    @property
    def label(self) -> str:
        return self.name.lower()


# A calm, barely fluctuating belief history signals an expert user; heavy
# fluctuation signals a novice. Bands are half-open with the top band closed
# so the partition of [0, 1] is total and unambiguous.
_BANDS = (
    (0.25, KnowledgeLevel.EXPERT),
    (0.50, KnowledgeLevel.PROFESSIONAL),
    (0.75, KnowledgeLevel.AMATEUR),
)

# Modes are aligned with levels in decreasing order of planning depth:
# strategic (long-term planning) down to scrambled (no discernible control).
_MODE_FOR_LEVEL = {
    KnowledgeLevel.EXPERT: ControlMode.STRATEGIC,
    KnowledgeLevel.PROFESSIONAL: ControlMode.TACTICAL,
    KnowledgeLevel.AMATEUR: ControlMode.OPPORTUNISTIC,
    KnowledgeLevel.NOVICE: ControlMode.SCRAMBLED,
}


def classify_level(ratio: float) -> KnowledgeLevel:
    """Map a sharp-variation ratio in [0, 1] to a knowledge level."""
    if not 0.0 <= ratio <= 1.0:
        raise OutOfRange(f"ratio {ratio} outside [0, 1]")
    for upper, level in _BANDS:
        if ratio < upper:
            return level
    return KnowledgeLevel.NOVICE


def select_mode(level: KnowledgeLevel) -> ControlMode:
    return _MODE_FOR_LEVEL[level]
