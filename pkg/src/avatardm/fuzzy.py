"""Fuzzy affect mapping: (sentiment, control mode) rule grid to a crisp emotion.

Triangular memberships fuzzify the compound sentiment score and the
sharp-variation ratio, the rule grid assigns an emotion per cell, and the
weighted centroid collapses the fired rules to one crisp scalar.
"""

from __future__ import annotations

from enum import IntEnum

import numpy as np

from .errors import AllZeroWeights, OutOfRange
from .levels import ControlMode
from .sentiment import SentimentClass


class Emotion(IntEnum):
    DISGUST = 0
    ANGER = 1
    FEAR = 2
    SAD = 3
    NEUTRAL = 4
    SURPRISE = 5
    HAPPY = 6

    @property
    def label(self) -> str:
        return self.name.lower()


# Centroid scalar per emotion, strictly increasing with valence. NEUTRAL sits
# between SAD and SURPRISE rather than on the integer grid.
CENTROIDS = {
    Emotion.DISGUST: 0.0,
    Emotion.ANGER: 1.0,
    Emotion.FEAR: 2.0,
    Emotion.SAD: 3.0,
    Emotion.NEUTRAL: 3.5,
    Emotion.SURPRISE: 4.0,
    Emotion.HAPPY: 5.0,
}

# Rule grid indexed [SentimentClass][ControlMode]. The three cells the source
# rule base leaves blank fall back to NEUTRAL so the mapping is total.
FAMM: dict[SentimentClass, dict[ControlMode, Emotion]] = {
    SentimentClass.NEGATIVE: {
        ControlMode.STRATEGIC: Emotion.DISGUST,
        ControlMode.TACTICAL: Emotion.ANGER,
        ControlMode.OPPORTUNISTIC: Emotion.NEUTRAL,
        ControlMode.SCRAMBLED: Emotion.FEAR,
    },
    SentimentClass.NEUTRAL: {
        ControlMode.STRATEGIC: Emotion.FEAR,
        ControlMode.TACTICAL: Emotion.SAD,
        ControlMode.OPPORTUNISTIC: Emotion.SURPRISE,
        ControlMode.SCRAMBLED: Emotion.SAD,
    },
    SentimentClass.POSITIVE: {
        ControlMode.STRATEGIC: Emotion.HAPPY,
        ControlMode.TACTICAL: Emotion.NEUTRAL,
        ControlMode.OPPORTUNISTIC: Emotion.SURPRISE,
        ControlMode.SCRAMBLED: Emotion.NEUTRAL,
    },
}

N_CELLS = 12

# Mode membership peaks sit at the centers of the four classification bands.
MODE_PEAKS = (0.125, 0.375, 0.625, 0.875)
MODE_HALF_WIDTH = 0.25


def _triangle(x: float, peak: float, half_width: float) -> float:
    return max(0.0, 1.0 - abs(x - peak) / half_width)


def sentiment_memberships(compound: float) -> np.ndarray:
    """Triangular memberships for (negative, neutral, positive).

    Negative peaks at -1 with support [-1, 0], neutral peaks at 0 with
    support [-0.5, 0.5], positive peaks at +1 with support [0, 1].
    """
    if not -1.0 <= compound <= 1.0:
        raise OutOfRange(f"compound {compound} outside [-1, 1]")
    return np.array(
        [
            max(0.0, -compound),
            _triangle(compound, 0.0, 0.5),
            max(0.0, compound),
        ]
    )


def mode_memberships(ratio: float) -> np.ndarray:
    """Triangular memberships for the four control modes, clamped to [0, 1]."""
    if not 0.0 <= ratio <= 1.0:
        raise OutOfRange(f"ratio {ratio} outside [0, 1]")
    return np.array([_triangle(ratio, peak, MODE_HALF_WIDTH) for peak in MODE_PEAKS])


def fuzzify(compound: float, ratio: float) -> np.ndarray:
    """Twelve rule weights w[cell] = mu_sentiment(row) * mu_mode(column),
    flattened row-major over (sentiment, mode)."""
    return np.outer(sentiment_memberships(compound), mode_memberships(ratio)).reshape(N_CELLS)


def cell_centroids(famm: dict | None = None) -> np.ndarray:
    """Centroid scalar per rule cell in fuzzify's flattening order."""
    grid = famm if famm is not None else FAMM
    return np.array(
        [
            CENTROIDS[grid[sentiment][mode]]
            for sentiment in SentimentClass
            for mode in ControlMode
        ]
    )


def defuzzify(weights: np.ndarray, famm: dict | None = None) -> float:
    """Weighted centroid of the fired rules: sum(w * centroid) / sum(w)."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (N_CELLS,):
        raise ValueError(f"expected {N_CELLS} weights, got shape {w.shape}")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    total = w.sum()
    if total <= 0.0:
        raise AllZeroWeights("no rule fired")
    return float(w @ cell_centroids(famm) / total)


def crisp_emotion(x: float) -> Emotion:
    """Emotion whose centroid is nearest to x; midpoint ties go to the lower
    centroid."""
    lo = CENTROIDS[Emotion.DISGUST]
    hi = CENTROIDS[Emotion.HAPPY]
    if not lo <= x <= hi:
        raise OutOfRange(f"crisp value {x} outside [{lo}, {hi}]")
    best = Emotion.DISGUST
    best_distance = abs(x - CENTROIDS[best])
    for emotion in Emotion:
        distance = abs(x - CENTROIDS[emotion])
        if distance < best_distance - 1e-15:
            best, best_distance = emotion, distance
    return best


def emotion_for(compound: float, ratio: float) -> tuple[Emotion, float]:
    """Full pipeline: fuzzify, defuzzify, snap to the nearest emotion."""
    x = defuzzify(fuzzify(compound, ratio))
    return crisp_emotion(x), x
