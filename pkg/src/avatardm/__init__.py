"""avatardm: a belief-tracking dialogue manager that learns its policy online
from sentiment-derived rewards and renders its affect through a fuzzy rule
base."""

from .engine import (
    ACTION_LABELS,
    AgentTurn,
    EngineAssets,
    EngineConfig,
    Session,
    load_assets,
    start_session,
)
from .errors import (
    AllZeroWeights,
    AsymmetricConflict,
    AvatarDmError,
    CycleDetected,
    DanglingReference,
    DegenerateObservation,
    EmptyInput,
    InsufficientHistory,
    LexiconError,
    ModelError,
    OntologyError,
    OutOfRange,
    SessionEnded,
)
from .fuzzy import Emotion, crisp_emotion, defuzzify, fuzzify
from .history import BeliefHistory, ValidationRule
from .levels import ControlMode, KnowledgeLevel, classify_level, select_mode
from .ontology import (
    DialogueObservation,
    IntentionState,
    Ontology,
    OntologyNode,
    Traversal,
    interpret,
    load_ontology,
    next_prompt,
)
from .pomdp import (
    Belief,
    PomdpModel,
    discounted_return,
    load_model,
    observation_likelihood,
    update_belief,
)
from .qlearn import QConfig, QTable, choose_action, episode_return, update_q
from .sentiment import (
    RewardSignal,
    SentimentClass,
    SentimentScore,
    classify,
    load_lexicon,
    score_utterance,
    to_reward,
)
from .sim import (
    DEFAULT_PROFILES,
    ExperimentMetrics,
    UserProfile,
    policy_improvement_report,
    run_experiment,
    simulate_turn,
    train_policy,
)
from .trend import (
    DwtResult,
    TrendResult,
    analyze,
    count_sharp_points,
    haar_dwt,
    inverse_haar,
    ncp_ratio,
)

__version__ = "0.1.0"
