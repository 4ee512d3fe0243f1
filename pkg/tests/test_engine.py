import time

import numpy as np
import pytest

from avatardm.engine import (
    CANNOT_RECOGNIZE,
    FAREWELL,
    EngineAssets,
    EngineConfig,
    start_session,
)
from avatardm.errors import SessionEnded
from avatardm.ontology import COMPLETION_TEXT, load_ontology
from avatardm.qlearn import QConfig


def tiny_assets(assets):
    """Same model and lexicon on a domain with no decidable features."""
    onto = load_ontology(
        {"greeting": "Hello.", "nodes": [{"id": "only", "name": "only", "kind": "required"}]}
    )
    return EngineAssets(ontology=onto, model=assets.model, lexicon=assets.lexicon)


class TestStartSession:
    def test_fresh_session_state(self, assets):
        session = start_session(assets, seed=1)
        assert session.turn == 0
        assert not session.goal_reached
        assert len(session.history) == 1
        assert session.belief.top()[0] == assets.model.states.index("wants_feature")

    def test_same_seed_same_behavior(self, assets, utterances):
        logs = []
        for _ in range(2):
            session = start_session(assets, seed=99)
            for text in utterances:
                session.step(text)
            logs.append(session.transcript_jsonl())
        assert logs[0] == logs[1]

    def test_empty_domain_greets_with_completion(self, assets):
        session = start_session(tiny_assets(assets), seed=0)
        assert session.completed
        assert COMPLETION_TEXT in session.greeting


class TestStep:
    def test_quit_ends_session_with_farewell(self, assets):
        session = start_session(assets, seed=0)
        turn = session.step("Quit")
        assert turn.reply == FAREWELL
        assert turn.action == "exit"
        assert session.goal_reached
        with pytest.raises(SessionEnded):
            session.step("hello?")

    def test_exit_matching_is_case_insensitive(self, assets):
        for text in ("exit", "EXIT", "Quit", "quit!"):
            session = start_session(assets, seed=0)
            session.step(text)
            assert session.goal_reached

    def test_unrecognizable_utterance_clarifies_at_any_node(self, assets, utterances):
        session = start_session(assets, seed=0)
        turn = session.step("What?")
        assert turn.action == "clarify"
        assert turn.reply == CANNOT_RECOGNIZE
        # Push the dialogue a few nodes along and ask again.
        for text in utterances[1:6]:
            session.step(text)
        turn = session.step("What?")
        assert turn.action == "clarify"
        assert turn.reply == CANNOT_RECOGNIZE

    def test_first_affirmation_keeps_wants_feature_dominant(self, assets):
        session = start_session(assets, seed=0)
        turn = session.step("Yes i would love to know more about searching a book functionality.")
        assert turn.sentiment.compound > 0.05
        label, prob = turn.belief_top
        assert label == "wants_feature"
        assert 0 < prob <= 1

    def test_turn_counter_and_history_length(self, assets, utterances):
        session = start_session(assets, seed=0)
        for i, text in enumerate(utterances, start=1):
            turn = session.step(text)
            assert session.turn == i
            assert len(session.history) == i + 1
            assert 0 < turn.belief_top[1] <= 1

    def test_all_turn_fields_populated(self, assets):
        session = start_session(assets, seed=0)
        turn = session.step("Yes please add it.")
        payload = turn.to_dict()
        assert set(payload) == {
            "reply",
            "action",
            "emotion",
            "crisp_x",
            "level",
            "mode",
            "reward",
            "sentiment",
            "belief_top",
            "ncp",
            "accepted",
        }
        for value in payload.values():
            assert value is not None

    def test_step_latency_under_ten_ms(self, assets, utterances):
        session = start_session(assets, seed=0)
        timings = []
        for text in utterances[:-1]:
            t0 = time.perf_counter()
            session.step(text)
            timings.append(time.perf_counter() - t0)
        assert np.median(timings) < 0.010


class TestTranscriptReplay:
    def test_full_replay_reaches_goal_with_correct_outcomes(
        self, assets, utterances, expected_outcomes
    ):
        session = start_session(assets, seed=0)
        for text in utterances:
            session.step(text)
        assert session.goal_reached
        assert session.completed
        assert session.turn == 26
        assert len(session.history) == 27
        for feature, want in expected_outcomes.items():
            assert session.traversal.decisions.get(feature) is want, feature

    def test_replay_is_deterministic(self, assets, utterances):
        runs = []
        for _ in range(2):
            session = start_session(assets, seed=7)
            for text in utterances:
                session.step(text)
            runs.append(session.transcript_jsonl())
        assert runs[0] == runs[1]


class TestLearningModeSessions:
    def test_exit_turn_updates_q_once(self, assets):
        cfg = EngineConfig(qconfig=QConfig(alpha=0.5, gamma=0.9, epsilon0=0.0, epsilon_min=0.0), learn=True)
        session = start_session(assets, seed=0, config=cfg)
        before = session.qtable.values.copy()
        session.step("Quit")
        changed = session.qtable.values != before
        assert changed.sum() == 1

    def test_inference_sessions_never_touch_the_table(self, assets, utterances):
        session = start_session(assets, seed=0)
        before = session.qtable.values.copy()
        for text in utterances:
            session.step(text)
        np.testing.assert_array_equal(session.qtable.values, before)

    def test_learning_session_accumulates_updates(self, assets, utterances):
        cfg = EngineConfig(qconfig=QConfig(alpha=0.1, gamma=0.9, epsilon0=0.0, epsilon_min=0.0), learn=True)
        session = start_session(assets, seed=0, config=cfg)
        for text in utterances[:6]:
            session.step(text)
        assert np.abs(session.qtable.values).sum() > 0
