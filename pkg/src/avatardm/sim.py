"""Simulated users at four knowledge levels driving end-to-end episodes.

Each profile answers the agent's prompts from a goal agenda, with
profile-specific chances of asking for clarification, going off script, or
answering with negative phrasing. Metrics mirror the accuracy, dialogue
length, and neutral/positive affect measures the engine is tuned for.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .engine import EngineAssets, EngineConfig, load_assets, start_session
from .levels import KnowledgeLevel
from .ontology import COMPLETION_TEXT, Ontology
from .qlearn import QConfig, QTable, epsilon_after, episode_return, state_space_size

TURN_CAP = 40

# Emotions counted as agreeable for the affect metric.
AGREEABLE_EMOTIONS = frozenset({"neutral", "surprise", "happy"})

DEFAULT_TEMPLATES = {
    "affirm": "Yes please add it.",
    "deny": "No, i don't think so.",
    "request_info": "Could you please explain more?",
    "offscript": "Hmm, that seems interesting.",
    "negative_affirm": "Ugh, fine, add it then.",
    "negative_deny": "Ugh, no, i don't want this one.",
    "quit": "Quit",
}


@dataclass(frozen=True)
class UserProfile:
    """Behavioral knobs for one simulated user class.

    The noise probabilities are mutually exclusive per turn; whatever
    remains is an on-agenda answer. Negative turns still answer the agenda,
    just with sour phrasing.
    """

    name: str
    level_target: KnowledgeLevel
    p_request_info: float
    p_offscript: float
    p_negative_sentiment: float
    templates: dict = field(default_factory=lambda: dict(DEFAULT_TEMPLATES))

    def __post_init__(self):
        for p in (self.p_request_info, self.p_offscript, self.p_negative_sentiment):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability {p} outside [0, 1]")
        if self.p_request_info + self.p_offscript + self.p_negative_sentiment > 1.0:
            raise ValueError("noise probabilities may not sum past 1")


DEFAULT_PROFILES = (
    UserProfile("expert", KnowledgeLevel.EXPERT, 0.0, 0.0, 0.0),
    UserProfile("professional", KnowledgeLevel.PROFESSIONAL, 0.10, 0.05, 0.05),
    UserProfile("amateur", KnowledgeLevel.AMATEUR, 0.25, 0.10, 0.10),
    UserProfile("novice", KnowledgeLevel.NOVICE, 0.35, 0.20, 0.15),
)


class Agenda:
    """The simulated user's goal state: which features they want, which node
    the agent is currently asking about, and whether the customization has
    been declared complete.

    The agenda also carries the user's patience: once they answer a prompt,
    seeing the same feature come back (the agent confirmed, lectured, or
    clarified instead of moving on) annoys them, and further answers for
    that feature turn sour."""

    def __init__(self, ontology: Ontology, wants: Optional[dict[str, bool]] = None):
        self.ontology = ontology
        decidable = ontology.decidable_ids()
        self.wants = {nid: True for nid in decidable} if wants is None else dict(wants)
        self.target: Optional[str] = None
        self.last_answered: Optional[str] = None
        self.done = False
        self._names = {nid: ontology[nid].name.lower() for nid in decidable}

    def observe_reply(self, text: str) -> None:
        """Track the prompted node by name; prompts always end with '?'."""
        if COMPLETION_TEXT in text:
            self.done = True
            return
        if not text.rstrip().endswith("?"):
            return
        lowered = text.lower()
        latest = None
        latest_pos = -1
        for nid, name in self._names.items():
            pos = lowered.rfind(name)
            if pos > latest_pos:
                latest, latest_pos = nid, pos
        if latest is not None:
            self.target = latest

    def wants_target(self) -> bool:
        if self.target is None:
            return True
        return self.wants.get(self.target, True)

    @property
    def annoyed(self) -> bool:
        return self.target is not None and self.target == self.last_answered

    def note_answer(self) -> None:
        self.last_answered = self.target


def simulate_turn(
    profile: UserProfile,
    agent_prompt: str,
    agenda: Agenda,
    rng: np.random.Generator,
) -> str:
    """Produce the next user utterance for the given agent prompt."""
    del agent_prompt  # the agenda already tracked it via observe_reply
    t = profile.templates
    if agenda.done:
        return t["quit"]
    draw = rng.random()
    if draw < profile.p_request_info:
        return t["request_info"]
    draw -= profile.p_request_info
    if draw < profile.p_offscript:
        return t["offscript"]
    draw -= profile.p_offscript
    wants = agenda.wants_target()
    sour = draw < profile.p_negative_sentiment or agenda.annoyed
    agenda.note_answer()
    if sour:
        return t["negative_affirm"] if wants else t["negative_deny"]
    return t["affirm"] if wants else t["deny"]


@dataclass
class EpisodeRecord:
    profile: str
    episode: int
    success: bool
    length: int
    rewards: list[float]
    emotions: list[str]
    turn_count: int
    discounted_return: float


@dataclass
class ExperimentMetrics:
    profile: str
    accuracy_pct: float
    avg_dialogue_length: float
    neutral_positive_pct: float
    avg_return: float
    episodes: int

    def __post_init__(self):
        if not 0.0 <= self.accuracy_pct <= 100.0:
            raise ValueError("accuracy must be a percentage")
        if not 0.0 <= self.neutral_positive_pct <= 100.0:
            raise ValueError("affect share must be a percentage")
        if self.avg_dialogue_length < 1.0:
            raise ValueError("dialogue length below one turn")


@dataclass
class ExperimentResult:
    per_profile: dict[str, ExperimentMetrics]
    average: ExperimentMetrics
    records: list[EpisodeRecord]

    def rows(self) -> list[ExperimentMetrics]:
        return list(self.per_profile.values()) + [self.average]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            [
                "profile",
                "accuracy_pct",
                "avg_dialogue_length",
                "neutral_positive_pct",
                "avg_return",
                "episodes",
            ]
        )
        for m in self.rows():
            writer.writerow(
                [
                    m.profile,
                    f"{m.accuracy_pct:.2f}",
                    f"{m.avg_dialogue_length:.3f}",
                    f"{m.neutral_positive_pct:.2f}",
                    f"{m.avg_return:.4f}",
                    m.episodes,
                ]
            )
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            m.profile: {
                "accuracy_pct": round(m.accuracy_pct, 4),
                "avg_dialogue_length": round(m.avg_dialogue_length, 4),
                "neutral_positive_pct": round(m.neutral_positive_pct, 4),
                "avg_return": round(m.avg_return, 6),
                "episodes": m.episodes,
            }
            for m in self.rows()
        }
        return json.dumps(payload, indent=2) + "\n"


def _episode_seeds(master_seed: int, profile_idx: int, episode: int) -> tuple[int, int]:
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(profile_idx, episode))
    state = ss.generate_state(2, dtype=np.uint64)
    return int(state[0]), int(state[1])


def run_episode(
    assets: EngineAssets,
    profile: UserProfile,
    session_seed: int,
    user_seed: int,
    qtable: Optional[QTable] = None,
    epsilon: float = 0.0,
    config: Optional[EngineConfig] = None,
    turn_cap: int = TURN_CAP,
    episode_idx: int = 0,
) -> EpisodeRecord:
    """Drive one full conversation and collect its per-turn record."""
    session = start_session(
        assets, seed=session_seed, config=config, qtable=qtable, epsilon=epsilon
    )
    agenda = Agenda(assets.ontology)
    agenda.observe_reply(session.greeting)
    rng = np.random.default_rng(user_seed)
    rewards: list[float] = []
    emotions: list[str] = []
    completion_turn: Optional[int] = None
    turns_taken = 0
    while not session.goal_reached:
        if agenda.done:
            utterance = profile.templates["quit"]
        elif turns_taken >= turn_cap:
            break
        else:
            utterance = simulate_turn(profile, session.traversal.prompt(), agenda, rng)
        turn = session.step(utterance)
        turns_taken += 1
        rewards.append(turn.reward)
        emotions.append(turn.emotion)
        if session.completed and completion_turn is None:
            completion_turn = turns_taken
        agenda.observe_reply(turn.reply)
    success = completion_turn is not None
    gamma = (config or EngineConfig()).qconfig.gamma
    return EpisodeRecord(
        profile=profile.name,
        episode=episode_idx,
        success=success,
        # Failed episodes count the cap so the mean is not survivorship-biased.
        length=completion_turn if success else turn_cap,
        rewards=rewards,
        emotions=emotions,
        turn_count=turns_taken,
        discounted_return=episode_return(rewards, gamma),
    )


def run_experiment(
    profiles=DEFAULT_PROFILES,
    episodes_per_profile: int = 200,
    seed: int = 0,
    assets: Optional[EngineAssets] = None,
    qtable: Optional[QTable] = None,
    epsilon: float = 0.0,
    turn_cap: int = TURN_CAP,
) -> ExperimentResult:
    """Run the metric experiment: episodes per profile plus the average row."""
    if episodes_per_profile < 1:
        raise ValueError("need at least one episode per profile")
    assets = assets or load_assets()
    records: list[EpisodeRecord] = []
    per_profile: dict[str, ExperimentMetrics] = {}
    for p_idx, profile in enumerate(profiles):
        profile_records = []
        for ep in range(episodes_per_profile):
            session_seed, user_seed = _episode_seeds(seed, p_idx, ep)
            profile_records.append(
                run_episode(
                    assets,
                    profile,
                    session_seed,
                    user_seed,
                    qtable=qtable,
                    epsilon=epsilon,
                    turn_cap=turn_cap,
                    episode_idx=ep,
                )
            )
        records.extend(profile_records)
        per_profile[profile.name] = _metrics_for(profile.name, profile_records)
    average = ExperimentMetrics(
        profile="average",
        accuracy_pct=float(np.mean([m.accuracy_pct for m in per_profile.values()])),
        avg_dialogue_length=float(
            np.mean([m.avg_dialogue_length for m in per_profile.values()])
        ),
        neutral_positive_pct=float(
            np.mean([m.neutral_positive_pct for m in per_profile.values()])
        ),
        avg_return=float(np.mean([m.avg_return for m in per_profile.values()])),
        episodes=sum(m.episodes for m in per_profile.values()),
    )
    return ExperimentResult(per_profile=per_profile, average=average, records=records)


def _metrics_for(name: str, records: list[EpisodeRecord]) -> ExperimentMetrics:
    emotions = [e for r in records for e in r.emotions]
    agreeable = sum(1 for e in emotions if e in AGREEABLE_EMOTIONS)
    return ExperimentMetrics(
        profile=name,
        accuracy_pct=100.0 * sum(r.success for r in records) / len(records),
        avg_dialogue_length=float(np.mean([r.length for r in records])),
        neutral_positive_pct=100.0 * agreeable / max(len(emotions), 1),
        avg_return=float(np.mean([r.discounted_return for r in records])),
        episodes=len(records),
    )


# ---------------------------------------------------------------------------
# Policy training and comparison

TRAINING_QCONFIG = QConfig(
    alpha=0.1, gamma=0.9, epsilon0=1.0, epsilon_decay=0.995, epsilon_min=0.01
)


@dataclass(frozen=True)
class PolicySpec:
    """A policy is a Q table plus an exploration rate; a fresh zero table at
    epsilon 0 is the hand-crafted baseline, epsilon 1 is uniform random."""

    name: str
    qtable: Optional[QTable] = None
    epsilon: float = 0.0


@dataclass
class TrainingTrace:
    episode_returns: list[float]
    mean_abs_q: list[float]
    epsilons: list[float]


def train_policy(
    assets: Optional[EngineAssets] = None,
    profiles=DEFAULT_PROFILES,
    episodes: int = 2000,
    cfg: QConfig = TRAINING_QCONFIG,
    seed: int = 0,
    turn_cap: int = TURN_CAP,
) -> tuple[QTable, TrainingTrace]:
    """Self-optimize one shared table over a rotating mix of user profiles."""
    assets = assets or load_assets()
    qtable = QTable(state_space_size(len(assets.ontology) + 1), 4)
    config = EngineConfig(qconfig=cfg, learn=True)
    trace = TrainingTrace([], [], [])
    for ep in range(episodes):
        profile = profiles[ep % len(profiles)]
        eps = epsilon_after(cfg, ep)
        session_seed, user_seed = _episode_seeds(seed, len(profiles) + 7, ep)
        record = run_episode(
            assets,
            profile,
            session_seed,
            user_seed,
            qtable=qtable,
            epsilon=eps,
            config=config,
            turn_cap=turn_cap,
            episode_idx=ep,
        )
        trace.episode_returns.append(record.discounted_return)
        trace.mean_abs_q.append(float(np.mean(np.abs(qtable.values))))
        trace.epsilons.append(eps)
    return qtable, trace


@dataclass
class PolicyComparison:
    profile: str
    before_return: float
    after_return: float
    before_length: float
    after_length: float
    improved: bool


def evaluate_policy(
    policy: PolicySpec,
    assets: Optional[EngineAssets] = None,
    profiles=DEFAULT_PROFILES,
    episodes_per_profile: int = 100,
    seed: int = 1,
    turn_cap: int = TURN_CAP,
) -> dict[str, tuple[float, float]]:
    """Mean (return, length) per profile with learning frozen, so the same
    table can be evaluated repeatedly on identical rollout seeds."""
    assets = assets or load_assets()
    out: dict[str, tuple[float, float]] = {}
    for p_idx, profile in enumerate(profiles):
        returns, lengths = [], []
        for ep in range(episodes_per_profile):
            session_seed, user_seed = _episode_seeds(seed, p_idx, ep)
            record = run_episode(
                assets,
                profile,
                session_seed,
                user_seed,
                qtable=policy.qtable,
                epsilon=policy.epsilon,
                turn_cap=turn_cap,
                episode_idx=ep,
            )
            returns.append(record.discounted_return)
            lengths.append(record.length)
        out[profile.name] = (float(np.mean(returns)), float(np.mean(lengths)))
    return out


def policy_improvement_report(
    before: PolicySpec,
    after: PolicySpec,
    eval_episodes: int = 100,
    assets: Optional[EngineAssets] = None,
    profiles=DEFAULT_PROFILES,
    seed: int = 1,
) -> list[PolicyComparison]:
    """Compare two policies on identical rollout seeds, profile by profile,
    with an Average row last."""
    assets = assets or load_assets()
    before_stats = evaluate_policy(
        before, assets=assets, profiles=profiles, episodes_per_profile=eval_episodes, seed=seed
    )
    after_stats = evaluate_policy(
        after, assets=assets, profiles=profiles, episodes_per_profile=eval_episodes, seed=seed
    )
    rows = []
    for profile in profiles:
        b_ret, b_len = before_stats[profile.name]
        a_ret, a_len = after_stats[profile.name]
        rows.append(
            PolicyComparison(
                profile=profile.name,
                before_return=b_ret,
                after_return=a_ret,
                before_length=b_len,
                after_length=a_len,
                improved=a_ret >= b_ret,
            )
        )
    rows.append(
        PolicyComparison(
            profile="average",
            before_return=float(np.mean([r.before_return for r in rows])),
            after_return=float(np.mean([r.after_return for r in rows])),
            before_length=float(np.mean([r.before_length for r in rows])),
            after_length=float(np.mean([r.after_length for r in rows])),
            improved=all(r.improved for r in rows),
        )
    )
    return rows


def comparison_csv(rows: list[PolicyComparison]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["profile", "before_return", "after_return", "before_length", "after_length", "improved"]
    )
    for r in rows:
        writer.writerow(
            [
                r.profile,
                f"{r.before_return:.4f}",
                f"{r.after_return:.4f}",
                f"{r.before_length:.3f}",
                f"{r.after_length:.3f}",
                int(r.improved),
            ]
        )
    return buf.getvalue()
