"""Differentiable link objective: soft mode mixing, block-diagonalizing
precoder, and sum spectral efficiency, all batched over samples in torch.

The precoder weights are computed from a detached copy of the effective
channel (stop gradient): selection gradients flow only through the soft
channel mixing inside the log-det rate expression, not through the SVDs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import torch

LN2 = math.log(2.0)


class BdInfeasibleError(ValueError):
    """Raised when the RF chain budget cannot null cross-user interference."""


@dataclass(frozen=True)
class LinkSettings:
    """Link budget shared by training and evaluation."""

    rho: float  # total transmit SNR, linear
    per_user_streams: tuple
    n_rf: int
    noise_power: float = 1.0

    @property
    def n_users(self) -> int:
        return len(self.per_user_streams)

    @property
    def n_streams(self) -> int:
        return int(sum(self.per_user_streams))


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def rf_selector(n_tx: int, n_rf: int) -> torch.Tensor:
    """Block analog stage: each RF chain drives one contiguous antenna group
    with unit gain; the identity map when n_rf == n_tx."""
    if n_rf <= 0 or n_tx % n_rf != 0:
        raise ValueError(f"n_rf must divide n_tx, got n_rf={n_rf}, n_tx={n_tx}")
    group = n_tx // n_rf
    f_rf = torch.zeros(n_tx, n_rf, dtype=torch.complex128)
    for c in range(n_rf):
        f_rf[c * group : (c + 1) * group, c] = 1.0
    return f_rf


def soft_effective_channels(channels: torch.Tensor, weights: torch.Tensor) -> torch.Tensor:
    """Mix per-mode channels with per-antenna weights.

    channels: (B, K, N_f, N_P, N_R, N_T) complex, weights: (B, N_T, N_P)
    real. Column m of the output is the weight-averaged mode response of
    antenna m. Returns (B, K, N_f, N_R, N_T).
    """
    return torch.einsum("bmp,bkfprm->bkfrm", weights.to(channels.dtype), channels)


def bd_beamformer(heff: torch.Tensor, f_rf: torch.Tensor, settings: LinkSettings) -> list:
    """Batched block-diagonalization baseband precoders.

    heff: (B, K, N_R, N_T) complex for one subcarrier. Returns one
    (B, n_rf, streams_k) tensor per user, jointly scaled so each batch
    entry radiates total power n_streams through f_rf.

    Cross-user compounds are assumed full row rank (generic channels), so
    the null space dimension is n_rf minus the stacked row count.
    """
    b, k_users, n_r, _ = heff.shape
    n_rf = f_rf.shape[1]
    compounds = heff @ f_rf  # (B, K, N_R, n_rf)
    mats = []
    for k in range(k_users):
        n_sk = int(settings.per_user_streams[k])
        others = [compounds[:, j] for j in range(k_users) if j != k]
        if others:
            stacked = torch.cat(others, dim=1)  # (B, rows, n_rf)
            rows = stacked.shape[1]
            null_dim = n_rf - rows
            if null_dim < n_sk:
                raise BdInfeasibleError(
                    f"user {k} null space has {max(null_dim, 0)} dimensions, needs {n_sk}"
                )
            _, _, vh = torch.linalg.svd(stacked, full_matrices=True)
            v_null = vh[:, rows:, :].mH  # (B, n_rf, null_dim)
        else:
            if n_rf < n_sk:
                raise BdInfeasibleError(f"user {k} needs {n_sk} streams but only {n_rf} RF chains")
            v_null = (
                torch.eye(n_rf, dtype=compounds.dtype).unsqueeze(0).expand(b, n_rf, n_rf)
            )
        _, _, vh2 = torch.linalg.svd(compounds[:, k] @ v_null, full_matrices=True)
        mats.append(v_null @ vh2[:, :n_sk, :].mH)  # (B, n_rf, n_sk)
    joint = f_rf @ torch.cat(mats, dim=2)  # (B, N_T, n_streams)
    power = (joint.abs() ** 2).sum(dim=(1, 2))  # (B,)
    scale = torch.sqrt(settings.n_streams / power)
    return [scale[:, None, None] * m for m in mats]


def spectral_efficiency(
    heff: torch.Tensor, f_bb: list, f_rf: torch.Tensor, settings: LinkSettings
) -> torch.Tensor:
    """Batched sum rate over users for one subcarrier.

    heff: (B, K, N_R, N_T) complex. f_bb: per-user (B, n_rf, streams_k)
    precoders, treated as constants. Returns (B,) rates in bit/s/Hz.
    """
    b, k_users, n_r, _ = heff.shape
    alpha = settings.rho / settings.n_streams
    eye = torch.eye(n_r, dtype=heff.dtype).unsqueeze(0)
    total = torch.zeros(b, dtype=torch.float64)
    g = heff @ f_rf  # (B, K, N_R, n_rf)
    for k in range(k_users):
        cov = settings.noise_power * eye.expand(b, n_r, n_r).clone()
        for j in range(k_users):
            if j == k:
                continue
            x = g[:, k] @ f_bb[j]  # (B, N_R, streams_j)
            cov = cov + x @ x.mH
        e = g[:, k] @ f_bb[k]
        sig = alpha * (e @ e.mH)
        total = total + (torch.linalg.slogdet(cov + sig)[1] - torch.linalg.slogdet(cov)[1]) / LN2
    return total


def se_objective(
    channels: torch.Tensor,
    weights: torch.Tensor,
    f_rf: torch.Tensor,
    settings: LinkSettings,
    beamformers: list | None = None,
) -> torch.Tensor:
    """Per-sample spectral efficiency of soft mode weights, averaged over
    subcarriers.

    channels: (B, K, N_f, N_P, N_R, N_T) complex, weights: (B, N_T, N_P).
    By default the precoder is recomputed from the detached effective
    channel each call; passing `beamformers` (one f_bb list per
    subcarrier) pins it, which makes the objective a pure function of the
    weights for gradient checks.
    """
    n_f = channels.shape[2]
    heff = soft_effective_channels(channels, weights)  # (B, K, N_f, N_R, N_T)
    total = torch.zeros(channels.shape[0], dtype=torch.float64)
    for f in range(n_f):
        h_f = heff[:, :, f]
        f_bb = beamformers[f] if beamformers is not None else bd_beamformer(h_f.detach(), f_rf, settings)
        total = total + spectral_efficiency(h_f, f_bb, f_rf, settings)
    return total / n_f


def one_hot_weights(modes: torch.Tensor, n_modes: int) -> torch.Tensor:
    """(B, N_T) 1-based mode digits -> (B, N_T, N_P) one-hot float64 weights."""
    return torch.nn.functional.one_hot(modes.long() - 1, n_modes).to(torch.float64)
