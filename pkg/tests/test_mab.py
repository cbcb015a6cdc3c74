import numpy as np
import pytest

from ramsel import (
    PolicyState,
    TsParams,
    UcbParams,
    normalize_reward,
    ts_sample_beliefs,
    ts_step,
    ucb_select,
    ucb_update,
)


# ---------- state bookkeeping ----------

def test_fresh_state_zeros():
    state = PolicyState.fresh(4)
    assert state.t == 0
    assert np.array_equal(state.r_bar, np.zeros(4))
    assert np.array_equal(state.n, np.zeros(4, dtype=np.int64))
    assert np.array_equal(state.s, np.zeros(4))
    assert np.array_equal(state.f, np.zeros(4))


def test_state_validates_counts():
    with pytest.raises(ValueError):
        PolicyState(t=3, r_bar=np.zeros(2), n=np.array([1, 1]), s=np.zeros(2), f=np.zeros(2))
    with pytest.raises(ValueError):
        PolicyState(t=0, r_bar=np.zeros(2), n=np.array([-1, 1]), s=np.zeros(2), f=np.zeros(2))


def test_running_mean_example():
    # one arm with mean 0.5 over 4 pulls receiving reward 1 moves to 0.6
    state = PolicyState(
        t=4,
        r_bar=np.array([0.5]),
        n=np.array([4], dtype=np.int64),
        s=np.zeros(1),
        f=np.zeros(1),
    )
    new = ucb_update(state, 0, 1.0)
    assert new.r_bar[0] == pytest.approx((0.5 * 4 + 1.0) / 5, abs=1e-15)
    assert new.n[0] == 5
    assert new.t == 5


def test_running_mean_matches_stored_history():
    rng = np.random.default_rng(0)
    state = PolicyState.fresh(3)
    history = [[], [], []]
    for _ in range(200):
        arm = int(rng.integers(0, 3))
        reward = float(rng.random())
        history[arm].append(reward)
        state = ucb_update(state, arm, reward)
    for i in range(3):
        if history[i]:
            assert state.r_bar[i] == pytest.approx(np.mean(history[i]), abs=1e-12)
        assert state.n[i] == len(history[i])
    assert state.t == 200


def test_update_leaves_other_arms_bitwise():
    state = PolicyState(
        t=6,
        r_bar=np.array([0.123456789, 0.5, 0.9]),
        n=np.array([2, 2, 2], dtype=np.int64),
        s=np.array([1.0, 0.0, 3.0]),
        f=np.array([0.0, 2.0, 1.0]),
    )
    new = ucb_update(state, 1, 0.7)
    assert new.r_bar[0] == state.r_bar[0]
    assert new.r_bar[2] == state.r_bar[2]
    assert np.array_equal(new.s, state.s)
    assert np.array_equal(new.f, state.f)


# ---------- UCB ----------

def test_ucb_hand_computed_selection():
    # two arms, five pulls each, gap in means decides
    state = PolicyState(
        t=10,
        r_bar=np.array([0.9, 0.1]),
        n=np.array([5, 5], dtype=np.int64),
        s=np.zeros(2),
        f=np.zeros(2),
    )
    params = UcbParams(gamma=5.0)
    bonus = np.sqrt(2.0 * np.log(10.0) / 5.0)
    scores = 5.0 * state.r_bar + bonus
    assert scores[0] > scores[1]
    assert ucb_select(state, params) == 0


def test_ucb_prefers_unpulled_arm():
    state = PolicyState(
        t=2,
        r_bar=np.array([1.0, 0.0, 1.0]),
        n=np.array([1, 0, 1], dtype=np.int64),
        s=np.zeros(3),
        f=np.zeros(3),
    )
    assert ucb_select(state, UcbParams()) == 1


def test_ucb_initial_sweep_order():
    state = PolicyState.fresh(3)
    params = UcbParams()
    for expected in range(3):
        arm = ucb_select(state, params)
        assert arm == expected
        state = ucb_update(state, arm, 0.0)


def test_ucb_exploration_prefers_less_pulled_on_equal_means():
    state = PolicyState(
        t=12,
        r_bar=np.array([0.5, 0.5]),
        n=np.array([10, 2], dtype=np.int64),
        s=np.zeros(2),
        f=np.zeros(2),
    )
    assert ucb_select(state, UcbParams(gamma=5.0)) == 1


def test_ucb_gamma_shifts_balance():
    # low gamma lets the bonus win, high gamma lets the mean win
    state = PolicyState(
        t=40,
        r_bar=np.array([0.6, 0.5]),
        n=np.array([30, 10], dtype=np.int64),
        s=np.zeros(2),
        f=np.zeros(2),
    )
    assert ucb_select(state, UcbParams(gamma=0.1)) == 1
    assert ucb_select(state, UcbParams(gamma=50.0)) == 0


def test_ucb_converges_to_best_arm():
    rng = np.random.default_rng(1)
    means = np.array([0.2, 0.8, 0.4])
    state = PolicyState.fresh(3)
    params = UcbParams(gamma=5.0)
    picks = []
    for _ in range(1000):
        arm = ucb_select(state, params)
        reward = float(np.clip(means[arm] + 0.05 * rng.standard_normal(), 0, 1))
        state = ucb_update(state, arm, reward)
        picks.append(arm)
    assert np.mean(np.asarray(picks[-200:]) == 1) >= 0.9


# ---------- Thompson sampling ----------

def test_ts_prior_beliefs_uniform_mean():
    rng = np.random.default_rng(2)
    state = PolicyState.fresh(1)
    params = TsParams(lam=1.0, omega=1.0)
    draws = np.array([ts_sample_beliefs(state, params, rng)[0] for _ in range(100_000)])
    assert draws.mean() == pytest.approx(0.5, abs=0.01)
    assert draws.min() >= 0.0 and draws.max() <= 1.0


def test_ts_beliefs_concentrate_on_successes():
    rng = np.random.default_rng(3)
    state = PolicyState(
        t=60,
        r_bar=np.array([0.9, 0.1]),
        n=np.array([30, 30], dtype=np.int64),
        s=np.array([300.0, 0.0]),
        f=np.array([0.0, 300.0]),
    )
    params = TsParams()
    draws = np.array([ts_sample_beliefs(state, params, rng) for _ in range(2000)])
    assert draws[:, 0].mean() > 0.95
    assert draws[:, 1].mean() < 0.05


def test_ts_step_success_and_failure_branches():
    params = TsParams(lam=1.0, omega=1.0, delta_s=10.0, delta_f=50.0)
    state = PolicyState.fresh(1)

    class OneRng:
        def random(self):
            return 0.0  # 0.0 < reward for any reward > 0: forced success

        def beta(self, a, b):
            return np.asarray(np.broadcast_to(0.5, np.shape(a)), dtype=float)

    new = ts_step(state, params, lambda arm: 1.0, OneRng())[2]
    assert new.s[0] == 10.0 and new.f[0] == 0.0

    class ZeroRng(OneRng):
        def random(self):
            return 0.999999  # above any reward < 1: forced failure

    new = ts_step(state, params, lambda arm: 0.5, ZeroRng())[2]
    assert new.s[0] == 0.0 and new.f[0] == 50.0


def test_ts_mass_conservation():
    rng = np.random.default_rng(4)
    params = TsParams(delta_s=10.0, delta_f=50.0)
    state = PolicyState.fresh(4)
    successes = 0
    failures = 0
    for _ in range(500):
        arm, reward, new = ts_step(state, params, lambda a: float(rng.random()), rng)
        if new.s.sum() > state.s.sum():
            successes += 1
        else:
            failures += 1
        state = new
    assert state.s.sum() == pytest.approx(10.0 * successes, abs=1e-9)
    assert state.f.sum() == pytest.approx(50.0 * failures, abs=1e-9)
    assert state.t == 500
    assert state.n.sum() == 500


def test_ts_converges_to_best_arm():
    rng = np.random.default_rng(5)
    means = np.array([0.1, 0.9])
    state = PolicyState.fresh(2)
    params = TsParams(lam=1.0, omega=1.0, delta_s=10.0, delta_f=50.0)
    picks = []
    for _ in range(1000):
        arm, _, state = ts_step(state, params, lambda a: float(means[a]), rng)
        picks.append(arm)
    assert np.mean(np.asarray(picks[-200:]) == 1) >= 0.9


def test_ts_step_updates_running_mean_too():
    rng = np.random.default_rng(6)
    state = PolicyState.fresh(2)
    arm, reward, new = ts_step(state, TsParams(), lambda a: 0.75, rng)
    assert reward == 0.75
    assert new.r_bar[arm] == pytest.approx(0.75)
    assert new.n[arm] == 1


def test_reward_outside_unit_interval_rejected():
    state = PolicyState.fresh(2)
    with pytest.raises(ValueError, match="normalize"):
        ucb_update(state, 0, 1.5)
    with pytest.raises(ValueError, match="normalize"):
        ts_step(state, TsParams(), lambda a: -0.1, np.random.default_rng(0))


# ---------- reward normalization ----------

def test_normalize_reward_affine_and_clamped():
    assert normalize_reward(5.0, (0.0, 10.0)) == pytest.approx(0.5)
    assert normalize_reward(-3.0, (0.0, 10.0)) == 0.0
    assert normalize_reward(17.0, (0.0, 10.0)) == 1.0
    assert normalize_reward(float("-inf"), (0.0, 10.0)) == 0.0


def test_normalize_reward_endpoints():
    assert normalize_reward(2.0, (2.0, 8.0)) == 0.0
    assert normalize_reward(8.0, (2.0, 8.0)) == 1.0
