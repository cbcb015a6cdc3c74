"""RF chain selection, block-diagonalization beamforming, spectral efficiency.

The RF stage is a pure antenna-to-chain connection matrix (no phase
shifters).  The digital stage places each user's beamformer in the null
space of all other users' compound channels, which drives the multi-user
interference to numerical zero and lets the sum rate decouple per user.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BdInfeasibleError

# Singular values below this fraction of the largest count as zero when
# computing the interference null space.
NULLSPACE_RTOL = 1e-10


@dataclass(frozen=True)
class LinkParams:
    """Link-level constants: SNR scale, noise power, per-user stream counts.

    All values are linear (not dB).  ``rho`` and ``noise_power`` are kept as
    independent knobs; nothing ties rho to 1/noise_power.
    """

    rho: float
    noise_power: float = 1.0
    per_user_streams: tuple[int, ...] = (1,)

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError("rho must be > 0")
        if self.noise_power <= 0:
            raise ValueError("noise_power must be > 0")
        if len(self.per_user_streams) < 1 or any(s < 1 for s in self.per_user_streams):
            raise ValueError("per_user_streams must be positive")
        object.__setattr__(self, "per_user_streams", tuple(int(s) for s in self.per_user_streams))

    @property
    def n_streams(self) -> int:
        return sum(self.per_user_streams)

    @property
    def n_users(self) -> int:
        return len(self.per_user_streams)


@dataclass(frozen=True)
class BeamformerPair:
    """RF selection matrix plus per-user digital beamformers."""

    f_rf: np.ndarray  # (n_tx, n_rf) binary
    f_bb: tuple[np.ndarray, ...]  # per user (n_rf, n_streams_k)

    def __post_init__(self):
        object.__setattr__(self, "f_rf", np.asarray(self.f_rf))
        object.__setattr__(self, "f_bb", tuple(np.asarray(m) for m in self.f_bb))

    def stacked_bb(self) -> np.ndarray:
        return np.hstack(self.f_bb)

    def total_power(self) -> float:
        """Squared Frobenius norm of the composite transmit beamformer."""
        return float(np.linalg.norm(self.f_rf @ self.stacked_bb()) ** 2)


def default_rf_selector(n_t: int, n_rf: int) -> np.ndarray:
    """Block antenna-to-chain map: chain j gets a contiguous group of
    n_t / n_rf antennas; the identity when n_rf == n_t."""
    if n_rf > n_t:
        raise ValueError(f"n_rf={n_rf} exceeds n_t={n_t}")
    if n_t % n_rf != 0:
        raise ValueError(f"n_rf={n_rf} must divide n_t={n_t}")
    block = n_t // n_rf
    f = np.zeros((n_t, n_rf))
    for j in range(n_rf):
        f[j * block : (j + 1) * block, j] = 1.0
    return f


def _null_space_basis(a: np.ndarray, n_rf: int) -> np.ndarray:
    """Orthonormal basis of the (numerical) null space of ``a`` (rows x n_rf)."""
    if a.shape[0] == 0:
        return np.eye(n_rf, dtype=np.complex128)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    if s.size and s[0] > 0:
        rank = int(np.sum(s > NULLSPACE_RTOL * s[0]))
    else:
        rank = 0
    return vh[rank:].conj().T


def bd_beamformer(effective_channels, f_rf: np.ndarray, params: LinkParams) -> BeamformerPair:
    """Zero-interference digital beamformers via block diagonalization.

    For each user, the beamformer lives in the null space of the stacked
    other-user compound channels and, within it, along the strongest right
    singular vectors of the user's own compound channel.  The composite
    beamformer is rescaled so its total power equals the stream count.
    With a single user this reduces to plain SVD eigen-beamforming.
    """
    k_users = len(effective_channels)
    if k_users != params.n_users:
        raise ValueError(
            f"{k_users} channels but {params.n_users} per-user stream counts"
        )
    f_rf = np.asarray(f_rf)
    n_rf = f_rf.shape[1]
    compounds = [np.asarray(h) @ f_rf for h in effective_channels]

    f_bb = []
    for k in range(k_users):
        others = [compounds[j] for j in range(k_users) if j != k]
        stacked = np.vstack(others) if others else np.empty((0, n_rf))
        v_null = _null_space_basis(stacked, n_rf)
        n_sk = params.per_user_streams[k]
        if v_null.shape[1] < n_sk:
            raise BdInfeasibleError(
                f"BD infeasible for dimensions: user {k} null space has "
                f"{v_null.shape[1]} dimensions, needs {n_sk}"
            )
        _, _, vh = np.linalg.svd(compounds[k] @ v_null, full_matrices=True)
        v_eff = vh[:n_sk].conj().T
        f_bb.append(v_null @ v_eff)

    power = float(np.linalg.norm(f_rf @ np.hstack(f_bb)) ** 2)
    if power <= 0:
        raise BdInfeasibleError("BD produced a zero beamformer")
    scale = math.sqrt(params.n_streams / power)
    return BeamformerPair(f_rf, tuple(scale * m for m in f_bb))


def _logdet_hermitian(m: np.ndarray) -> float:
    """log2 det of a Hermitian positive-definite matrix via Cholesky."""
    chol = np.linalg.cholesky(m)
    return 2.0 * float(np.sum(np.log2(np.real(np.diag(chol)))))


def spectral_efficiency(effective_channels, beamformer: BeamformerPair, params: LinkParams) -> float:
    """Sum rate in bits/s/Hz at one (subcarrier, time step).

    Per user: log2 det(I + (rho / n_streams) * C^-1 * E E^H) where E is the
    user's precoded channel and C collects other-user interference plus
    noise.  Noise power > 0 keeps C invertible.
    """
    k_users = len(effective_channels)
    if k_users != len(beamformer.f_bb) or k_users != params.n_users:
        raise ValueError("user count mismatch between channels, beamformer and params")
    f_rf = beamformer.f_rf
    if any(np.asarray(h).shape[1] != f_rf.shape[0] for h in effective_channels):
        raise ValueError("channel column count does not match RF selector rows")

    alpha = params.rho / params.n_streams
    total = 0.0
    for k in range(k_users):
        g = np.asarray(effective_channels[k]) @ f_rf
        n_r = g.shape[0]
        cov = params.noise_power * np.eye(n_r, dtype=np.complex128)
        for j in range(k_users):
            if j == k:
                continue
            x = g @ beamformer.f_bb[j]
            cov += x @ x.conj().T
        e = g @ beamformer.f_bb[k]
        signal = alpha * (e @ e.conj().T)
        total += _logdet_hermitian(cov + signal) - _logdet_hermitian(cov)
    return total
