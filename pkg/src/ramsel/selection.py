"""Static RA state selection: exhaustive search, the uniform-random
baseline, and the annealed soft one-hot primitive.

Ties always break toward the smallest index, which makes results
independent of evaluation order.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet
from .errors import BdInfeasibleError, SearchCapError
from .evaluate import evaluate_assignment
from .modes import ModeAssignment, num_states
from .precoding import LinkParams

DEFAULT_SEARCH_CAP = 10**6


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of a state-space search."""

    assignment: ModeAssignment
    se: float
    evaluations: int
    infeasible: int = 0


def exhaustive_search(
    channels: ChannelSet,
    k_users: int,
    f: int | None,
    t: int,
    f_rf: np.ndarray,
    params: LinkParams,
    cap: int = DEFAULT_SEARCH_CAP,
) -> SelectionResult:
    """Best assignment over all n_modes**n_tx states by direct enumeration.

    States whose BD design is infeasible score -inf and are counted in the
    result.  Ties break toward the smallest state index.
    """
    n_total = num_states(channels.n_tx, channels.n_modes)
    if n_total > cap:
        raise SearchCapError(
            f"exhaustive search infeasible: {n_total} states exceed cap {cap}"
        )
    users = list(range(k_users))
    best_index = -1
    best_se = -np.inf
    infeasible = 0
    for idx in range(n_total):
        assignment = ModeAssignment.from_state_index(idx, channels.n_tx, channels.n_modes)
        try:
            se = evaluate_assignment(channels, assignment, f_rf, params, t, f, users)
        except BdInfeasibleError:
            infeasible += 1
            continue
        if se > best_se:
            best_se = se
            best_index = idx
    if best_index < 0:
        raise BdInfeasibleError("BD infeasible for dimensions: every state infeasible")
    winner = ModeAssignment.from_state_index(best_index, channels.n_tx, channels.n_modes)
    return SelectionResult(winner, best_se, n_total, infeasible)


def random_assignment(n_t: int, n_p: int, rng: np.random.Generator) -> ModeAssignment:
    """One uniform draw over the n_p**n_t assignments from an existing stream."""
    digits = rng.integers(0, n_p, size=n_t)
    return ModeAssignment(tuple(int(d) + 1 for d in digits), n_p)


def random_selection(n_t: int, n_p: int, seed) -> ModeAssignment:
    """Uniformly random assignment; deterministic per seed."""
    if n_p < 1:
        raise ValueError("n_p must be >= 1")
    return random_assignment(n_t, n_p, np.random.default_rng(seed))


def annealed_softmax(x, alpha: float) -> np.ndarray:
    """exp(alpha * x) / sum(exp(alpha * x)) with max-subtraction so large
    alpha saturates to one-hot instead of overflowing."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("softmax input must be finite")
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    z = alpha * x
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def project_to_one_hot(soft) -> ModeAssignment:
    """Discretize an n_tx x n_modes score matrix: per antenna take the
    argmax mode (ties toward the smaller mode index)."""
    soft = np.asarray(soft, dtype=float)
    if soft.ndim != 2:
        raise ValueError("expected a 2-D antenna-by-mode matrix")
    if not np.all(np.isfinite(soft)):
        raise ValueError("scores must be finite")
    modes = soft.argmax(axis=1) + 1
    return ModeAssignment(tuple(int(m) for m in modes), soft.shape[1])
