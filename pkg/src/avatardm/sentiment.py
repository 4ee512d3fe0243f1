"""Lexicon-based sentiment scoring and the reward signal it induces.

Scoring sums token valences (negation flips the next scored token, trailing
exclamation marks amplify) and squashes the sum into a compound score in
[-1, 1]. The reward fed to the learner is the compound's ternary class plus
a per-turn step penalty and a terminal goal bonus.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path

import math

from .errors import EmptyInput, LexiconError

# Valence sums are squashed with the conventional alpha = 15 normalizer:
# compound = score / sqrt(score^2 + 15).
NORM_ALPHA = 15.0

# Each '!' amplifies the net score, capped at three marks.
BANG_BOOST = 0.292
MAX_BANGS = 3

# These invert the sign of the next scored (non-negator) token. "no" and
# "don't" additionally carry their own negative valence in the lexicon.
NEGATORS = frozenset({"no", "not", "don't"})

POSITIVE_CUTOFF = 0.05
NEGATIVE_CUTOFF = -0.05

STEP_PENALTY = -0.1
TERMINAL_BONUS = 5.0

_TOKEN_RE = re.compile(r"[a-z']+")


class SentimentClass(IntEnum):
    NEGATIVE = 0
    NEUTRAL = 1
    POSITIVE = 2

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class SentimentScore:
    compound: float
    neg: float
    neu: float
    pos: float


@dataclass(frozen=True)
class RewardSignal:
    value: float
    sentiment_class: SentimentClass
    turn_penalty_applied: bool


def load_lexicon(source: str | Path) -> dict[str, float]:
    """Read a token<TAB>valence table. '#' comments allowed, duplicates and
    valences outside [-4, 4] rejected."""
    lexicon: dict[str, float] = {}
    text = Path(source).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconError(f"line {lineno}: expected token<TAB>valence, got {raw!r}")
        token, valence_text = parts[0].strip(), parts[1].strip()
        try:
            valence = float(valence_text)
        except ValueError as exc:
            raise LexiconError(f"line {lineno}: bad valence {valence_text!r}") from exc
        if not -4.0 <= valence <= 4.0:
            raise LexiconError(f"line {lineno}: valence {valence} outside [-4, 4]")
        if token in lexicon:
            raise LexiconError(f"line {lineno}: duplicate token {token!r}")
        lexicon[token] = valence
    return lexicon


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens with inner apostrophes kept and one-character
    tokens dropped (they carry no sentiment and skew the proportions)."""
    return [t for t in _TOKEN_RE.findall(text.lower()) if len(t) > 1]


def score_utterance(text: str, lexicon: dict[str, float]) -> SentimentScore:
    """Score one utterance against the valence table."""
    if not text or not text.strip():
        raise EmptyInput("cannot score an empty utterance")
    tokens = tokenize(text)

    total = 0.0
    pos_weight = 0.0
    neg_weight = 0.0
    neu_weight = 0.0
    negation_pending = False
    for token in tokens:
        valence = lexicon.get(token)
        if token in NEGATORS:
            # A negator never consumes a pending flip; it targets the next
            # sentiment-bearing token instead.
            if valence is not None:
                total += valence
                neg_weight += abs(valence) + 1.0 if valence < 0 else 0.0
                pos_weight += valence + 1.0 if valence > 0 else 0.0
            else:
                neu_weight += 1.0
            negation_pending = True
            continue
        if valence is None:
            neu_weight += 1.0
            continue
        if negation_pending:
            valence = -valence
            negation_pending = False
        total += valence
        if valence > 0:
            pos_weight += valence + 1.0
        elif valence < 0:
            neg_weight += abs(valence) + 1.0
        else:
            neu_weight += 1.0

    bangs = min(text.count("!"), MAX_BANGS)
    if bangs and total != 0.0:
        total += math.copysign(BANG_BOOST * bangs, total)

    compound = total / math.sqrt(total * total + NORM_ALPHA)
    weight_sum = pos_weight + neg_weight + neu_weight
    if weight_sum == 0.0:
        neg, neu, pos = 0.0, 1.0, 0.0
    else:
        neg = neg_weight / weight_sum
        neu = neu_weight / weight_sum
        pos = pos_weight / weight_sum
    return SentimentScore(
        compound=round(compound, 4),
        neg=round(neg, 3),
        neu=round(neu, 3),
        pos=round(pos, 3),
    )


def classify(score: SentimentScore) -> SentimentClass:
    if score.compound >= POSITIVE_CUTOFF:
        return SentimentClass.POSITIVE
    if score.compound <= NEGATIVE_CUTOFF:
        return SentimentClass.NEGATIVE
    return SentimentClass.NEUTRAL


def to_reward(sentiment_class: SentimentClass, is_terminal_goal: bool) -> RewardSignal:
    """Base reward +1/0/-1 by class; non-terminal turns pay a small length
    penalty, the goal-reaching turn earns a bonus that dominates it."""
    base = {
        SentimentClass.POSITIVE: 1.0,
        SentimentClass.NEUTRAL: 0.0,
        SentimentClass.NEGATIVE: -1.0,
    }[sentiment_class]
    if is_terminal_goal:
        return RewardSignal(base + TERMINAL_BONUS, sentiment_class, turn_penalty_applied=False)
    return RewardSignal(base + STEP_PENALTY, sentiment_class, turn_penalty_applied=True)
