"""Online arm selection: UCB and Thompson Sampling over representative
RA states, with the running-mean reward bookkeeping both share.

Policy state is immutable from the caller's perspective: updates return a
fresh object, so traces can keep old states around and experiments cannot
alias each other.  Rewards are normalized to [0, 1] by the offline min-max
statistics before they reach either policy.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PolicyState:
    """Per-arm bookkeeping: running mean reward, pull count, and the
    Thompson success/failure masses.  ``t`` counts completed steps."""

    t: int
    r_bar: np.ndarray
    n: np.ndarray
    s: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "r_bar", np.asarray(self.r_bar, dtype=float))
        object.__setattr__(self, "n", np.asarray(self.n, dtype=np.int64))
        object.__setattr__(self, "s", np.asarray(self.s, dtype=float))
        object.__setattr__(self, "f", np.asarray(self.f, dtype=float))
        arms = self.r_bar.shape[0]
        if not (self.n.shape[0] == self.s.shape[0] == self.f.shape[0] == arms):
            raise ValueError("per-arm arrays disagree on arm count")
        if np.any(self.n < 0) or np.any(self.s < 0) or np.any(self.f < 0):
            raise ValueError("counts and masses must be nonnegative")
        if int(self.n.sum()) != self.t:
            raise ValueError("sum of arm counts must equal the step counter")

    @classmethod
    def fresh(cls, n_arms: int) -> "PolicyState":
        if n_arms < 1:
            raise ValueError("need at least one arm")
        zeros = np.zeros(n_arms)
        return cls(0, zeros, np.zeros(n_arms, dtype=np.int64), zeros.copy(), zeros.copy())

    @property
    def n_arms(self) -> int:
        return self.r_bar.shape[0]


@dataclass(frozen=True)
class UcbParams:
    gamma: float = 5.0

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be > 0")


@dataclass(frozen=True)
class TsParams:
    lam: float = 1.0
    omega: float = 1.0
    delta_s: float = 10.0
    delta_f: float = 50.0

    def __post_init__(self):
        if min(self.lam, self.omega, self.delta_s, self.delta_f) <= 0:
            raise ValueError("all Thompson parameters must be > 0")


def _check_reward(reward: float) -> float:
    reward = float(reward)
    if not 0.0 <= reward <= 1.0:
        raise ValueError(f"reward {reward} outside [0, 1]; normalize first")
    return reward


def ucb_select(state: PolicyState, params: UcbParams) -> int:
    """Arm with the best gamma * r_bar_i + sqrt(2 ln t / n_i) score.

    While any arm is unpulled the smallest such arm is forced (the
    initialization sweep).  Ties break toward the smallest index.
    """
    unpulled = np.nonzero(state.n == 0)[0]
    if unpulled.size:
        return int(unpulled[0])
    bonus = np.sqrt(2.0 * np.log(max(state.t, 1)) / state.n)
    scores = params.gamma * state.r_bar + bonus
    return int(scores.argmax())


def ucb_update(state: PolicyState, arm: int, reward: float) -> PolicyState:
    """Fold one observed reward into the selected arm's running mean and
    count; every other arm is untouched."""
    reward = _check_reward(reward)
    if not 0 <= arm < state.n_arms:
        raise ValueError(f"arm {arm} out of range")
    r_bar = state.r_bar.copy()
    n = state.n.copy()
    r_bar[arm] = (r_bar[arm] * n[arm] + reward) / (n[arm] + 1)
    n[arm] += 1
    return PolicyState(state.t + 1, r_bar, n, state.s.copy(), state.f.copy())


def ts_sample_beliefs(state: PolicyState, params: TsParams, rng: np.random.Generator) -> np.ndarray:
    """One Beta(s_i + lambda, f_i + omega) draw per arm."""
    return rng.beta(state.s + params.lam, state.f + params.omega)


def ts_step(state: PolicyState, params: TsParams, reward_fn, rng: np.random.Generator):
    """One Thompson round: sample beliefs, play the argmax arm, run a
    Bernoulli trial on the observed normalized reward, and shift success
    or failure mass by delta_s / delta_f accordingly.

    Returns (arm, reward, new state).  Exactly one arm's (s, f) changes.
    """
    eta = ts_sample_beliefs(state, params, rng)
    arm = int(eta.argmax())
    reward = _check_reward(reward_fn(arm))
    success = rng.random() < reward
    s = state.s.copy()
    f = state.f.copy()
    if success:
        s[arm] += params.delta_s
    else:
        f[arm] += params.delta_f
    r_bar = state.r_bar.copy()
    n = state.n.copy()
    r_bar[arm] = (r_bar[arm] * n[arm] + reward) / (n[arm] + 1)
    n[arm] += 1
    return arm, reward, PolicyState(state.t + 1, r_bar, n, s, f)


def normalize_reward(se: float, stats: tuple[float, float]) -> float:
    """Min-max map of a raw SE value into [0, 1], clamped outside the
    offline range."""
    se_min, se_max = stats
    return float(np.clip((se - se_min) / (se_max - se_min), 0.0, 1.0))
