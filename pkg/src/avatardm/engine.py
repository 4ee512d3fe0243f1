"""Per-session dialogue management: observe, estimate, reward, remember,
analyze the trend, classify, act, learn, and emote, in that order.

A session owns its belief history, Q table and random stream, so distinct
sessions can run concurrently; steps on one session are strictly serialized
by its owner.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from . import fuzzy, qlearn, sentiment, trend
from .errors import DegenerateObservation, ModelError, SessionEnded
from .history import BeliefHistory, ValidationRule
from .levels import ControlMode, KnowledgeLevel, classify_level, select_mode
from .ontology import (
    COMPLETION_TEXT,
    DialogueObservation,
    INTENTION_LABELS,
    OBSERVATION_LABELS,
    Ontology,
    Traversal,
    interpret,
    load_ontology,
)
from .pomdp import Belief, PomdpModel, load_model, update_belief
from .qlearn import QConfig, QTable
from .sentiment import SentimentClass, SentimentScore, load_lexicon

# Dialogue-act templates the policy chooses between.
ADVANCE_PROMPT = 0
GIVE_INFO = 1
CONFIRM = 2
CLARIFY = 3
ACTION_LABELS = ("advance_prompt", "give_info", "confirm", "clarify")

# The observation constrains which templates make sense; the learner picks
# within the feasible set. An unrecognizable utterance can only be clarified.
VALID_ACTIONS = {
    DialogueObservation.AFFIRM: (ADVANCE_PROMPT, GIVE_INFO, CONFIRM),
    DialogueObservation.DENY: (ADVANCE_PROMPT, GIVE_INFO, CONFIRM),
    DialogueObservation.REQUEST_INFO: (GIVE_INFO, CLARIFY),
    DialogueObservation.UNKNOWN: (CLARIFY,),
}

CANNOT_RECOGNIZE = (
    "Your response cannot be recognized. Please answer with the suggested response."
)
FAREWELL = "Thank you and see you soon."

EXIT_WORDS = frozenset({"exit", "quit"})

# Interactive sessions exploit by default; training harnesses pass their own
# exploration schedule.
INFERENCE_QCONFIG = QConfig(
    alpha=0.001, gamma=0.9, epsilon0=0.0, epsilon_decay=0.995, epsilon_min=0.0
)


def _asset_path(name: str) -> Path:
    return Path(str(resources.files("avatardm") / "assets" / name))


@dataclass(frozen=True)
class EngineAssets:
    """Everything immutable a session needs: domain, model, lexicon."""

    ontology: Ontology
    model: PomdpModel
    lexicon: dict[str, float]


def load_assets(
    ontology_path: str | Path | None = None,
    model_path: str | Path | None = None,
    lexicon_path: str | Path | None = None,
) -> EngineAssets:
    """Load assets, falling back to the packaged book-portal domain."""
    ontology = load_ontology(ontology_path or _asset_path("ontology.json"))
    model = load_model(model_path or _asset_path("model.json"))
    lexicon = load_lexicon(lexicon_path or _asset_path("lexicon.txt"))
    if model.observations != OBSERVATION_LABELS:
        raise ModelError(
            f"model observations {model.observations} must be {OBSERVATION_LABELS}"
        )
    if model.states != INTENTION_LABELS:
        raise ModelError(f"model states {model.states} must be {INTENTION_LABELS}")
    if model.actions != ACTION_LABELS:
        raise ModelError(f"model actions {model.actions} must be {ACTION_LABELS}")
    return EngineAssets(ontology=ontology, model=model, lexicon=lexicon)


@dataclass(frozen=True)
class EngineConfig:
    """Session behavior switches.

    Interactive sessions run the hand-crafted policy over a frozen table
    (learn=False); training harnesses flip learn on and supply the
    exploration schedule. Keeping inference frozen is what makes replays of
    a fixed transcript deterministic and stable.
    """

    qconfig: QConfig = INFERENCE_QCONFIG
    validation_rules: tuple[ValidationRule, ...] = ()
    learn: bool = False


@dataclass(frozen=True)
class AgentTurn:
    """Everything the agent decided and displayed for one user turn."""

    reply: str
    action: str
    emotion: str
    crisp_x: float
    level: str
    mode: str
    reward: float
    sentiment: SentimentScore
    belief_top: tuple[str, float]
    ncp: int
    accepted: bool

    def to_dict(self) -> dict:
        return {
            "reply": self.reply,
            "action": self.action,
            "emotion": self.emotion,
            "crisp_x": self.crisp_x,
            "level": self.level,
            "mode": self.mode,
            "reward": self.reward,
            "sentiment": {
                "compound": self.sentiment.compound,
                "neg": self.sentiment.neg,
                "neu": self.sentiment.neu,
                "pos": self.sentiment.pos,
            },
            "belief_top": [self.belief_top[0], self.belief_top[1]],
            "ncp": self.ncp,
            "accepted": self.accepted,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def is_exit_utterance(text: str) -> bool:
    """Case-insensitive bare 'exit'/'quit', tolerating trailing punctuation."""
    return text.strip().strip(".!?").strip().lower() in EXIT_WORDS


class Session:
    """One conversation. Steps must be serialized by the owner."""

    def __init__(
        self,
        assets: EngineAssets,
        seed: int = 0,
        config: Optional[EngineConfig] = None,
        qtable: Optional[QTable] = None,
        epsilon: Optional[float] = None,
        session_id: Optional[str] = None,
    ):
        self.id = session_id or uuid.uuid4().hex
        self.assets = assets
        self.config = config or EngineConfig()
        self.rng = np.random.default_rng(seed)
        self.seed = seed
        self.traversal = Traversal(ontology=assets.ontology)
        # Maximal initial certainty: the dialogue opens on a feature the user
        # is assumed to want (the required root was just added for them).
        self.belief = assets.model.initial_belief("wants_feature")
        self.history = BeliefHistory(self.belief)
        self.n_positions = len(assets.ontology) + 1
        self.qtable = qtable or QTable(
            qlearn.state_space_size(self.n_positions), len(ACTION_LABELS)
        )
        self.epsilon = self.config.qconfig.epsilon0 if epsilon is None else epsilon
        self.turn = 0
        self.goal_reached = False
        self.turns: list[AgentTurn] = []
        # The greeting acts as the first prompt advance.
        self._prev_action = ADVANCE_PROMPT
        self._prev_state = self._state_id(KnowledgeLevel.AMATEUR, SentimentClass.NEUTRAL)
        self.greeting = self._compose_greeting()

    # -- helpers ------------------------------------------------------------

    def _compose_greeting(self) -> str:
        greeting = self.assets.ontology.greeting
        prompt = self.traversal.prompt()
        return f"{greeting} {prompt}".strip()

    def _position(self) -> int:
        if self.traversal.cursor is None:
            return len(self.assets.ontology)
        return self.assets.ontology.node_index(self.traversal.cursor)

    def _state_id(self, level: KnowledgeLevel, s_class: SentimentClass) -> int:
        return qlearn.encode_state(self._position(), level, s_class, self.n_positions)

    @property
    def completed(self) -> bool:
        return self.traversal.complete

    # -- the turn loop ------------------------------------------------------

    def step(self, utterance: str) -> AgentTurn:
        """Run one full observe/learn/respond cycle for a user utterance."""
        if self.goal_reached:
            raise SessionEnded(f"session {self.id} already ended")
        model = self.assets.model

        is_exit = is_exit_utterance(utterance)
        score = sentiment.score_utterance(utterance, self.assets.lexicon)
        s_class = sentiment.classify(score)
        if is_exit:
            observation = DialogueObservation.EXIT
        else:
            dist = interpret(utterance, self.traversal.current_node())
            observation = DialogueObservation(int(np.argmax(dist)))
        reward = sentiment.to_reward(
            s_class, is_terminal_goal=is_exit and self.traversal.complete
        )

        # Belief update with rollback on constraint violations or an
        # impossible observation.
        try:
            candidate = update_belief(model, self.belief, self._prev_action, observation)
            accepted, effective = self.history.validate_or_rollback(
                self.config.validation_rules, candidate, int(observation)
            )
        except DegenerateObservation:
            accepted, effective = False, self.history.current()
        self.history.append(effective, self._prev_action, int(observation), accepted=accepted)
        self.belief = effective
        self.turn += 1

        # Trend over the scalarized history drives the level and mode.
        series = self.history.scalar_series()
        if len(series) >= 2:
            trend_result = trend.analyze(series)
            ncp, ratio = trend_result.ncp, trend_result.ncp_ratio
            level = classify_level(ratio)
        else:
            # No trend signal yet: assume the cautious middle band.
            ncp, ratio = 0, 0.0
            level = KnowledgeLevel.AMATEUR
        mode = select_mode(level)

        state_now = self._state_id(level, s_class)
        if is_exit:
            # Final update only; no action is taken after the farewell.
            if self.config.learn:
                qlearn.update_q(
                    self.qtable,
                    self._prev_state,
                    self._prev_action,
                    reward.value,
                    state_now,
                    self.config.qconfig,
                    terminal=True,
                )
            action_label = "exit"
            reply = FAREWELL
            self.goal_reached = True
        else:
            action = qlearn.choose_action(
                self.qtable,
                state_now,
                self.epsilon,
                self.rng,
                valid_actions=VALID_ACTIONS[observation],
            )
            if self.config.learn:
                qlearn.update_q(
                    self.qtable,
                    self._prev_state,
                    self._prev_action,
                    reward.value,
                    state_now,
                    self.config.qconfig,
                )
            reply = self._respond(action, observation)
            action_label = ACTION_LABELS[action]
            self._prev_state, self._prev_action = state_now, action

        emotion, crisp_x = fuzzy.emotion_for(score.compound, ratio)
        top_idx, top_prob = self.belief.top()
        agent_turn = AgentTurn(
            reply=reply,
            action=action_label,
            emotion=emotion.label,
            crisp_x=crisp_x,
            level=level.label,
            mode=mode.label,
            reward=reward.value,
            sentiment=score,
            belief_top=(model.states[top_idx], top_prob),
            ncp=ncp,
            accepted=accepted,
        )
        self.turns.append(agent_turn)
        return agent_turn

    def _respond(self, action: int, observation: DialogueObservation) -> str:
        walk = self.traversal
        node = walk.current_node()
        if action == ADVANCE_PROMPT:
            if node is None:
                return COMPLETION_TEXT
            if observation not in (DialogueObservation.AFFIRM, DialogueObservation.DENY):
                return walk.prompt()
            accept = observation is DialogueObservation.AFFIRM
            newly_excluded = (
                [c for c in node.conflicts_with if c not in walk.decisions]
                if accept
                else []
            )
            walk.decide(accept)
            if accept:
                parts = [f"Functionality {node.name} has been added to your system."]
                if newly_excluded:
                    names = " and ".join(
                        self.assets.ontology[c].name for c in newly_excluded
                    )
                    parts.append(f"As a result, {names} cannot be selected.")
            else:
                parts = [f"Functionality {node.name} will not be added."]
            parts.append(walk.prompt())
            return " ".join(parts)
        if action == GIVE_INFO:
            if node is None:
                return COMPLETION_TEXT
            return node.info_text or node.description or walk.prompt()
        if action == CONFIRM:
            return f"Please confirm. {walk.prompt()}"
        return CANNOT_RECOGNIZE

    def transcript_jsonl(self) -> str:
        """One JSON line per agent turn, the canonical replay log."""
        return "\n".join(turn.to_json() for turn in self.turns) + ("\n" if self.turns else "")


def start_session(
    assets: EngineAssets,
    seed: int = 0,
    config: Optional[EngineConfig] = None,
    qtable: Optional[QTable] = None,
    epsilon: Optional[float] = None,
) -> Session:
    """Create a fresh session with the initial belief committed to history."""
    return Session(assets, seed=seed, config=config, qtable=qtable, epsilon=epsilon)
