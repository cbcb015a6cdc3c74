"""Scoring mode assignments: single evaluations and whole-state-space tables.

The scalar path (``evaluate_assignment``) composes effective channels, runs
the BD design and scores the sum rate; it is the reference everything else
is checked against.  ``se_table`` scores every state of the mode space at
one time step.  For one and two users it uses a batched closed form: BD
interference is zero by construction, so each user's rate reduces to a
function of the singular values of its compound channel restricted to the
null space, and all states go through stacked SVDs at once.  Ranks that
vary across states (or more users) drop back to the scalar path.
"""

import numpy as np

from .channel import ChannelSet, effective_channels_all_users
from .errors import BdInfeasibleError
from .modes import ModeAssignment, enumerate_mode_digits, num_states
from .precoding import NULLSPACE_RTOL, LinkParams, bd_beamformer, spectral_efficiency


def evaluate_assignment(
    channels: ChannelSet,
    assignment,
    f_rf: np.ndarray,
    params: LinkParams,
    t: int,
    f: int | None = None,
    users=None,
) -> float:
    """Sum rate of one assignment at step ``t``; mean over subcarriers when
    ``f`` is None, a single subcarrier otherwise."""
    subcarriers = range(channels.n_subcarriers) if f is None else [f]
    total = 0.0
    count = 0
    for fi in subcarriers:
        eff = effective_channels_all_users(channels, assignment, fi, t, users)
        beamformer = bd_beamformer(eff, f_rf, params)
        total += spectral_efficiency(eff, beamformer, params)
        count += 1
    return total / count


def _effective_stack(channels: ChannelSet, user: int, f: int, t: int) -> np.ndarray:
    """Effective channels of one user for every state: (n_states, n_rx, n_tx)."""
    block = channels.tensor[user, f, t]  # (n_modes, n_rx, n_tx)
    digits = enumerate_mode_digits(channels.n_tx, channels.n_modes)
    # advanced indexing puts the broadcast (state, antenna) axes first
    eff = block[digits, :, np.arange(channels.n_tx)]  # (n_states, n_tx, n_rx)
    return eff.transpose(0, 2, 1)


def _rates_from_singular_values(sv: np.ndarray, n_sk: int, coeff: np.ndarray) -> np.ndarray:
    """Per-state rate sum log2(1 + coeff * sigma_i^2) over the first n_sk
    singular values, zero-padding when fewer exist."""
    top = sv[:, :n_sk]
    if top.shape[1] < n_sk:
        pad = np.zeros((top.shape[0], n_sk - top.shape[1]))
        top = np.hstack([top, pad])
    return np.log2(1.0 + coeff[:, None] * top**2).sum(axis=1)


def _se_table_batched(
    channels: ChannelSet, t: int, f_rf: np.ndarray, params: LinkParams, f: int, users
) -> np.ndarray | None:
    """All-states SE at one (subcarrier, step) via stacked SVDs.

    Returns None when the instance falls outside the fast path's
    assumptions (more than 2 users, or interference rank varying across
    states), in which case the caller uses the scalar loop.
    """
    k_users = len(users)
    if k_users > 2:
        return None
    f_rf = np.asarray(f_rf)
    n_rf = f_rf.shape[1]
    compounds = [_effective_stack(channels, k, f, t) @ f_rf for k in users]
    n_states_total = compounds[0].shape[0]

    per_user_sv = []
    f_bb = []
    for k in range(k_users):
        if k_users == 1:
            v_null = np.broadcast_to(
                np.eye(n_rf, dtype=np.complex128), (n_states_total, n_rf, n_rf)
            )
            null_dim = n_rf
        else:
            other = compounds[1 - k]
            s_o = np.linalg.svd(other, compute_uv=False)
            ranks = (s_o > NULLSPACE_RTOL * s_o[:, :1]).sum(axis=1)
            rank = int(ranks[0])
            if not np.all(ranks == rank):
                return None
            _, _, vh_o = np.linalg.svd(other, full_matrices=True)
            null_dim = n_rf - rank
            if null_dim < params.per_user_streams[k]:
                return None
            v_null = vh_o[:, rank:].conj().transpose(0, 2, 1)
        n_sk = params.per_user_streams[k]
        if n_sk > null_dim:
            return None
        own = compounds[k] @ v_null  # (n_states, n_rx, null_dim)
        _, sv, vh = np.linalg.svd(own, full_matrices=True)
        per_user_sv.append(sv)
        v_eff = vh[:, :n_sk].conj().transpose(0, 2, 1)
        f_bb.append(v_null @ v_eff)

    composite = np.matmul(f_rf, np.concatenate(f_bb, axis=2))
    power = np.sum(np.abs(composite) ** 2, axis=(1, 2))
    bad = power <= 0
    power[bad] = 1.0
    gain2 = params.n_streams / power
    coeff = (params.rho / (params.n_streams * params.noise_power)) * gain2

    table = np.zeros(n_states_total)
    for k in range(k_users):
        table += _rates_from_singular_values(per_user_sv[k], params.per_user_streams[k], coeff)
    table[bad] = -np.inf
    return table


def _se_table_scalar(
    channels: ChannelSet, t: int, f_rf: np.ndarray, params: LinkParams, f: int, users
) -> np.ndarray:
    n_total = num_states(channels.n_tx, channels.n_modes)
    table = np.empty(n_total)
    for idx in range(n_total):
        assignment = ModeAssignment.from_state_index(idx, channels.n_tx, channels.n_modes)
        try:
            table[idx] = evaluate_assignment(channels, assignment, f_rf, params, t, f, users)
        except BdInfeasibleError:
            table[idx] = -np.inf
    return table


def se_table(
    channels: ChannelSet,
    t: int,
    f_rf: np.ndarray,
    params: LinkParams,
    f: int | None = None,
    users=None,
) -> np.ndarray:
    """SE of every state of the mode space at step ``t`` -> (n_states,).

    BD-infeasible states score -inf.  Mean over subcarriers when ``f`` is
    None.  The batched and scalar paths agree to within accumulated
    round-off (well under 1e-9 relative); tests pin this down.
    """
    if users is None:
        users = list(range(channels.n_users))
    subcarriers = range(channels.n_subcarriers) if f is None else [f]
    acc = None
    for fi in subcarriers:
        part = _se_table_batched(channels, t, f_rf, params, fi, users)
        if part is None:
            part = _se_table_scalar(channels, t, f_rf, params, fi, users)
        acc = part if acc is None else acc + part
    return acc / len(list(subcarriers))
