from types import SimpleNamespace

import numpy as np
import pytest

from avatardm.levels import KnowledgeLevel
from avatardm.qlearn import (
    QConfig,
    QTable,
    choose_action,
    decode_state,
    encode_state,
    episode_return,
    epsilon_after,
    state_space_size,
    update_q,
)
from avatardm.sentiment import SentimentClass


class TestQConfig:
    def test_defaults_validate(self):
        cfg = QConfig()
        assert cfg.alpha == 0.001
        assert cfg.gamma == 0.9

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(alpha=0.0),
            dict(alpha=1.5),
            dict(gamma=1.0),
            dict(gamma=-0.1),
            dict(epsilon_decay=0.0),
            dict(epsilon0=0.5, epsilon_min=0.6),
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            QConfig(**kwargs)


class TestChooseAction:
    def test_pure_argmax(self):
        q = QTable(1, 3)
        q.values[0] = [0.1, 0.5, 0.3]
        rng = np.random.default_rng(0)
        assert choose_action(q, 0, 0.0, rng) == 1

    def test_tie_breaks_to_lowest_id(self):
        q = QTable(1, 3)
        q.values[0] = [0.5, 0.5, 0.1]
        rng = np.random.default_rng(0)
        assert choose_action(q, 0, 0.0, rng) == 0

    def test_epsilon_one_is_uniform(self):
        q = QTable(1, 4)
        rng = np.random.default_rng(123)
        counts = np.zeros(4)
        for _ in range(10000):
            counts[choose_action(q, 0, 1.0, rng)] += 1
        np.testing.assert_allclose(counts / 10000, 0.25, atol=0.05)

    def test_valid_action_subset_restricts_both_branches(self):
        q = QTable(1, 4)
        q.values[0] = [9.0, 0.0, 1.0, 0.0]
        rng = np.random.default_rng(1)
        # Greedy over the subset ignores the best global action.
        assert choose_action(q, 0, 0.0, rng, valid_actions=(1, 2)) == 2
        for _ in range(200):
            assert choose_action(q, 0, 1.0, rng, valid_actions=(1, 3)) in (1, 3)


class TestUpdateQ:
    def test_hand_evaluated_single_step(self):
        q = QTable(2, 2)
        q.values[1] = [2.0, 0.5]
        cfg = QConfig(alpha=0.5, gamma=0.9)
        update_q(q, 0, 0, 1.0, 1, cfg)
        # 0 + 0.5 * (1 + 0.9 * 2 - 0) = 1.4
        assert q.values[0, 0] == pytest.approx(1.4)

    def test_zero_reward_zero_table_unchanged(self):
        q = QTable(3, 2)
        update_q(q, 1, 1, 0.0, 2, QConfig(alpha=0.5))
        np.testing.assert_array_equal(q.values, np.zeros((3, 2)))

    def test_alpha_zero_never_updates(self):
        # The config type forbids alpha == 0, so drive the math directly.
        q = QTable(2, 2)
        q.values[:] = [[1.0, 2.0], [3.0, 4.0]]
        before = q.values.copy()
        update_q(q, 0, 1, 5.0, 1, SimpleNamespace(alpha=0.0, gamma=0.9))
        np.testing.assert_array_equal(q.values, before)

    def test_touches_exactly_one_cell(self):
        rng = np.random.default_rng(2)
        q = QTable(5, 4)
        q.values[:] = rng.normal(size=(5, 4))
        before = q.values.copy()
        update_q(q, 3, 2, -1.0, 0, QConfig(alpha=0.3))
        diff = q.values != before
        assert diff.sum() == 1
        assert diff[3, 2]

    def test_terminal_update_drops_bootstrap(self):
        q = QTable(2, 2)
        q.values[1] = [10.0, 10.0]
        update_q(q, 0, 0, 1.0, 1, QConfig(alpha=1.0), terminal=True)
        assert q.values[0, 0] == pytest.approx(1.0)


class TestEpsilonSchedule:
    def test_decay_formula(self):
        cfg = QConfig(epsilon0=1.0, epsilon_decay=0.995, epsilon_min=0.01)
        for k in (0, 1, 10, 500):
            assert epsilon_after(cfg, k) == pytest.approx(max(0.01, 0.995**k))

    def test_floor(self):
        cfg = QConfig(epsilon0=1.0, epsilon_decay=0.5, epsilon_min=0.1)
        assert epsilon_after(cfg, 100) == 0.1


class TestEpisodeReturn:
    def test_matches_discounted_sum(self):
        assert episode_return([1, 1, 1], 0.5) == pytest.approx(1.75)

    def test_empty_is_zero(self):
        assert episode_return([], 0.9) == 0.0

    def test_gamma_one_rejected_by_config(self):
        with pytest.raises(ValueError):
            QConfig(gamma=1.0)


class ChainMdp:
    """Three-state corridor: moving right from the middle pays 1 and ends."""

    n_states = 3
    n_actions = 2
    LEFT, RIGHT = 0, 1
    terminal = 2

    def step(self, state, action):
        if action == self.RIGHT:
            nxt = state + 1
        else:
            nxt = max(state - 1, 0)
        reward = 1.0 if nxt == self.terminal else 0.0
        return nxt, reward, nxt == self.terminal


def value_iteration_oracle(env, gamma, sweeps=500):
    """Independent dynamic-programming fixed point on the known chain."""
    q = np.zeros((env.n_states, env.n_actions))
    for _ in range(sweeps):
        new = np.zeros_like(q)
        for s in range(env.n_states - 1):
            for a in range(env.n_actions):
                nxt, reward, done = env.step(s, a)
                new[s, a] = reward + (0.0 if done else gamma * q[nxt].max())
        q = new
    return q


class TestConvergence:
    def test_chain_mdp_reaches_oracle_fixed_point(self):
        env = ChainMdp()
        cfg = QConfig(alpha=0.1, gamma=0.9, epsilon0=1.0, epsilon_decay=0.995, epsilon_min=0.01)
        q = QTable(env.n_states, env.n_actions)
        rng = np.random.default_rng(0)
        for episode in range(5000):
            epsilon = epsilon_after(cfg, episode)
            state = 0
            for _ in range(50):
                action = choose_action(q, state, epsilon, rng)
                nxt, reward, done = env.step(state, action)
                update_q(q, state, action, reward, nxt, cfg, terminal=done)
                state = nxt
                if done:
                    break
        oracle = value_iteration_oracle(env, cfg.gamma)
        for s in (0, 1):
            assert q.values[s, env.RIGHT] == pytest.approx(oracle[s, env.RIGHT], abs=1e-2)
            greedy = int(np.argmax(q.values[s]))
            assert greedy == int(np.argmax(oracle[s]))


class TestCheckpoint:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(3)
        q = QTable(6, 3)
        q.values[:] = rng.normal(size=(6, 3))
        path = tmp_path / "table.csv"
        q.save(path)
        loaded = QTable.load(path)
        np.testing.assert_array_equal(loaded.values, q.values)

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "junk.csv"
        path.write_text("state,action,value\n0,0,1\n", encoding="utf-8")
        with pytest.raises(ValueError):
            QTable.load(path)


class TestStateEncoding:
    def test_bijection(self):
        n_positions = 7
        seen = set()
        for pos in range(n_positions):
            for level in KnowledgeLevel:
                for s_class in SentimentClass:
                    sid = encode_state(pos, level, s_class, n_positions)
                    assert decode_state(sid, n_positions) == (pos, level, s_class)
                    seen.add(sid)
        assert len(seen) == state_space_size(n_positions)
        assert max(seen) == state_space_size(n_positions) - 1
