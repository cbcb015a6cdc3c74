"""Per-mode MIMO channel synthesis and effective-channel composition.

For every radiation mode the synthesizer produces the channel that results
when *all* transmit antennas use that mode.  A concrete per-antenna mode
assignment then composes its effective channel column-by-column: antenna m
contributes column m of the channel of its selected mode.

Channels come from a geometric path model recomputed exactly at every time
step, so motion-induced phase drift (Doppler) falls out of the changing
path lengths rather than an autoregressive fading process.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .geometry import GeometrySpec, Trajectory
from .modes import ModeAssignment


@dataclass(frozen=True)
class ChannelSet:
    """Per-mode channels for all users, subcarriers and time steps.

    ``tensor[k, f, t, v]`` is the n_rx x n_tx channel of user ``k`` on
    subcarrier ``f`` at step ``t`` when every antenna uses mode ``v`` (0-based).
    Read-only after construction; safe to share across threads.
    """

    tensor: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.tensor)
        if t.ndim != 6:
            raise ValueError(f"channel tensor must have 6 axes, got {t.ndim}")
        if not np.isfinite(t).all():
            raise ValueError("channel tensor contains NaN or Inf")
        t = np.ascontiguousarray(t, dtype=np.complex128)
        t.setflags(write=False)
        object.__setattr__(self, "tensor", t)

    @property
    def dims(self) -> tuple[int, int, int, int, int, int]:
        """(n_users, n_subcarriers, n_steps, n_modes, n_rx, n_tx)."""
        return self.tensor.shape

    @property
    def n_users(self) -> int:
        return self.tensor.shape[0]

    @property
    def n_subcarriers(self) -> int:
        return self.tensor.shape[1]

    @property
    def n_steps(self) -> int:
        return self.tensor.shape[2]

    @property
    def n_modes(self) -> int:
        return self.tensor.shape[3]

    @property
    def n_rx(self) -> int:
        return self.tensor.shape[4]

    @property
    def n_tx(self) -> int:
        return self.tensor.shape[5]

    @property
    def n_states(self) -> int:
        return self.n_modes**self.n_tx


def _user_positions(user, trajectory: Trajectory | None) -> np.ndarray:
    """Resolve one user's motion input to a (num_steps, 3) track."""
    if user is None:
        if trajectory is None:
            raise ConfigError("user follows the shared trajectory but none was given")
        return trajectory.positions()
    if hasattr(user, "positions"):
        pos = user.positions()
        if trajectory is not None and len(pos) != trajectory.num_steps:
            raise ConfigError("per-user trajectory length differs from the shared one")
        return pos
    fixed = np.asarray(user, dtype=float).reshape(3)
    steps = trajectory.num_steps if trajectory is not None else 1
    return np.tile(fixed, (steps, 1))


def generate_channels(
    geometry: GeometrySpec,
    trajectory: Trajectory | None,
    users,
    seed,
) -> ChannelSet:
    """Synthesize per-mode channels along the users' tracks.

    ``users`` is a sequence of motion specs: ``None`` (follow the shared
    ``trajectory``), a fixed (x, y, z) position, or a trajectory of its own
    with the same step count.  Deterministic for a fixed seed: the only
    random quantities are the scatterers' complex reflection coefficients.
    """
    if len(users) < 1:
        raise ConfigError("at least one user required")
    if not geometry.paths.los and not geometry.paths.scatterers:
        raise ConfigError("empty propagation environment")

    tracks = [_user_positions(u, trajectory) for u in users]
    n_steps = len(tracks[0])
    for tr in tracks:
        if len(tr) != n_steps:
            raise ConfigError("user tracks disagree on the number of steps")

    k_users = len(users)
    n_f = geometry.n_subcarriers
    n_p = geometry.n_modes
    n_r = geometry.rx_antennas
    n_t = geometry.n_tx

    rng = np.random.default_rng(seed)
    scat = geometry.paths.scatterers
    n_scat = len(scat)
    # One complex reflection coefficient per (user, scatterer), fixed over time.
    coeff = np.zeros((k_users, n_scat), dtype=np.complex128)
    if n_scat:
        draws = rng.standard_normal((k_users, n_scat, 2))
        coeff = (draws[..., 0] + 1j * draws[..., 1]) / np.sqrt(2.0)
        coeff *= np.asarray([s.gain for s in scat])

    if geometry.paths.los and n_scat:
        k_r = geometry.paths.rician_k
        los_amp = np.sqrt(k_r / (k_r + 1.0))
        scat_amp = np.sqrt(1.0 / ((k_r + 1.0) * n_scat))
    elif geometry.paths.los:
        los_amp, scat_amp = 1.0, 0.0
    else:
        los_amp, scat_amp = 0.0, np.sqrt(1.0 / n_scat)

    bs = np.asarray(geometry.bs_position)
    tx_off = geometry.tx_element_offsets()
    rx_off = geometry.rx_element_offsets()
    lam = geometry.wavelength
    freqs = geometry.subcarrier_frequencies()
    c0 = 299_792_458.0
    d_ref = geometry.reference_distance_m
    pl_half = geometry.pathloss_exponent / 2.0
    gains_per_mode = geometry.mode_patterns

    tensor = np.zeros((k_users, n_f, n_steps, n_p, n_r, n_t), dtype=np.complex128)

    for k, track in enumerate(tracks):
        paths = []
        if geometry.paths.los:
            # departure toward the user, arrival looking back at the BS
            delta = track - bs
            dist = np.linalg.norm(delta, axis=1)
            dep = delta / dist[:, None]
            paths.append((dist, dep, -dep, np.full(n_steps, los_amp, dtype=np.complex128)))
        for i, s in enumerate(scat):
            sp = np.asarray(s.position)
            d1 = np.linalg.norm(sp - bs)
            dep = np.tile((sp - bs) / d1, (n_steps, 1))
            delta2 = sp - track
            d2 = np.linalg.norm(delta2, axis=1)
            arr = delta2 / d2[:, None]
            paths.append((d1 + d2, dep, arr, np.full(n_steps, scat_amp * coeff[k, i])))

        for dist, dep, arr, base_amp in paths:
            amp = base_amp * (d_ref / np.maximum(dist, d_ref)) ** pl_half
            # phase per subcarrier from the absolute path delay
            phase = np.exp(-2j * np.pi * np.outer(freqs, dist / c0))  # (n_f, n_steps)
            a_t = np.exp(2j * np.pi * (dep @ tx_off.T) / lam)  # (n_steps, n_tx)
            a_r = np.exp(2j * np.pi * (arr @ rx_off.T) / lam)  # (n_steps, n_rx)
            for v, pattern in enumerate(gains_per_mode):
                g = pattern.gain(dep)
                contrib = np.einsum(
                    "ft,t,tr,tm->ftrm", phase, amp * g, a_r, a_t.conj(), optimize=True
                )
                tensor[k, :, :, v] += contrib

    return ChannelSet(tensor)


def _as_mode_digits(assignment, n_tx: int, n_modes: int) -> np.ndarray:
    """Validate an assignment (object or raw one-hot matrix) against the set."""
    if not isinstance(assignment, ModeAssignment):
        assignment = ModeAssignment.from_one_hot(assignment)
    if assignment.n_antennas != n_tx or assignment.n_modes != n_modes:
        raise ValueError(
            f"assignment for {assignment.n_antennas} antennas / {assignment.n_modes} modes "
            f"does not match channel set ({n_tx} antennas, {n_modes} modes)"
        )
    return np.asarray(assignment.modes) - 1


def effective_channel(channels: ChannelSet, assignment, k: int, f: int, t: int) -> np.ndarray:
    """Channel seen by user ``k`` under a per-antenna mode assignment.

    Column ``m`` of the result is column ``m`` of the mode-``modes[m]``
    channel; this is the diagonal-selection composition of the per-mode
    channels.  Accepts a :class:`ModeAssignment` or a raw one-hot matrix.
    """
    digits = _as_mode_digits(assignment, channels.n_tx, channels.n_modes)
    block = channels.tensor[k, f, t]  # (n_modes, n_rx, n_tx)
    return np.ascontiguousarray(block[digits, :, np.arange(channels.n_tx)].T)


def effective_channels_all_users(
    channels: ChannelSet, assignment, f: int, t: int, users=None
) -> list[np.ndarray]:
    """Effective channel of each requested user at one (subcarrier, step)."""
    if users is None:
        users = range(channels.n_users)
    return [effective_channel(channels, assignment, k, f, t) for k in users]


def state_feature_vector(channels: ChannelSet, state_index: int, snapshot_indices) -> np.ndarray:
    """Real feature vector describing one state: snapshot-averaged effective
    channels of all users/subcarriers, real parts then imaginary parts.

    Length is 2 * n_users * n_subcarriers * n_rx * n_tx.
    """
    snaps = np.asarray(snapshot_indices, dtype=int)
    if snaps.size == 0:
        raise ValueError("empty snapshot set")
    if snaps.min() < 0 or snaps.max() >= channels.n_steps:
        raise ValueError("snapshot index out of range")
    assignment = ModeAssignment.from_state_index(state_index, channels.n_tx, channels.n_modes)
    digits = np.asarray(assignment.modes) - 1
    # (k, f, t, n_rx, n_tx) restricted to the snapshots, columns picked per antenna
    sel = channels.tensor[:, :, snaps][:, :, :, digits, :, np.arange(channels.n_tx)]
    # sel axes: (n_tx, k, f, t, n_rx) after advanced indexing; average snapshots
    avg = sel.mean(axis=3)  # (n_tx, k, f, n_rx)
    avg = np.moveaxis(avg, 0, -1)  # (k, f, n_rx, n_tx)
    return np.concatenate([avg.real.ravel(), avg.imag.ravel()])
