"""Training loops for the mode selector.

Unsupervised training descends the negative mean spectral efficiency of
the soft selection; the precoder inside the objective is recomputed from
detached channels every step.  Semi-supervised training first fits the
probability rows to exhaustive-search labels with a cross-entropy loss,
then fine-tunes on the rate objective.
"""

from __future__ import annotations

import numpy as np
import torch

from .beamform import LinkSettings, rf_selector, se_objective
from .dataset import DatasetBundle
from .modeling import ModelSpec, ModeSelector, one_hot_targets_from_modes


class TrainingDivergedError(RuntimeError):
    """Raised when a loss turns non-finite during training."""


def anneal_factor(spec: ModelSpec, epoch: int, total_epochs: int) -> float:
    """Linear anneal from the start factor to alpha_max over the run.

    epoch is 1-based; the final epoch trains at alpha_max exactly.
    """
    if total_epochs <= 0:
        return spec.alpha_max
    frac = epoch / total_epochs
    return spec.alpha_start + (spec.alpha_max - spec.alpha_start) * frac


def _batches(indices: np.ndarray, batch_size: int, rng: np.random.Generator):
    order = rng.permutation(indices)
    for start in range(0, len(order), batch_size):
        yield order[start : start + batch_size]


def train_unsupervised(
    bundle: DatasetBundle,
    spec: ModelSpec,
    settings: LinkSettings,
    seed: int = 0,
    epochs: int | None = None,
    batch_size: int | None = None,
    lr: float | None = None,
    model: ModeSelector | None = None,
):
    """Fit (or fine-tune) a selector on the negative-rate objective.

    Returns (model, history) where history has one mean train loss per
    epoch.  Deterministic for fixed inputs and seed.
    """
    epochs = spec.epochs if epochs is None else epochs
    batch_size = spec.batch_size if batch_size is None else batch_size
    lr = spec.lr if lr is None else lr
    torch.manual_seed(seed)
    if model is None:
        model = ModeSelector(spec)
    channels = torch.from_numpy(bundle.tensor)
    f_rf = rf_selector(bundle.n_tx, settings.n_rf)
    opt = torch.optim.Adam(model.parameters(), lr=lr)
    rng = np.random.default_rng(seed)
    train_idx = bundle.splits["train"]
    history = []
    model.train()
    for epoch in range(1, epochs + 1):
        alpha = anneal_factor(spec, epoch, epochs)
        losses = []
        for batch in _batches(train_idx, batch_size, rng):
            weights = model(bundle.images[batch], alpha)
            loss = -se_objective(channels[batch], weights, f_rf, settings).mean()
            if not torch.isfinite(loss):
                raise TrainingDivergedError(f"non-finite loss at epoch {epoch}")
            opt.zero_grad()
            loss.backward()
            opt.step()
            losses.append(float(loss.detach()))
        history.append(float(np.mean(losses)))
        model.alpha = alpha
    model.eval()
    return model, history


def train_supervised(
    bundle: DatasetBundle,
    spec: ModelSpec,
    seed: int = 0,
    epochs: int = 20,
    batch_size: int = 128,
    lr: float = 0.01,
):
    """Pretrain the probability head on exhaustive-search mode labels.

    Per-antenna binary cross entropy against one-hot rows, evaluated at
    the un-annealed head (alpha_start).  Returns (model, history).
    """
    torch.manual_seed(seed)
    model = ModeSelector(spec)
    targets = one_hot_targets_from_modes(
        torch.from_numpy(bundle.modes), spec.n_modes
    )  # (S, N_T, N_P) float32
    opt = torch.optim.SGD(model.parameters(), lr=lr)
    rng = np.random.default_rng(seed)
    train_idx = bundle.splits["train"]
    history = []
    model.train()
    for epoch in range(1, epochs + 1):
        losses = []
        for batch in _batches(train_idx, batch_size, rng):
            probs = model(bundle.images[batch], spec.alpha_start)
            loss = torch.nn.functional.binary_cross_entropy(probs, targets[batch])
            if not torch.isfinite(loss):
                raise TrainingDivergedError(f"non-finite loss at epoch {epoch}")
            opt.zero_grad()
            loss.backward()
            opt.step()
            losses.append(float(loss.detach()))
        history.append(float(np.mean(losses)))
    model.eval()
    return model, history


def train_semisupervised(
    bundle: DatasetBundle,
    spec: ModelSpec,
    settings: LinkSettings,
    seed: int = 0,
    sup_epochs: int = 20,
    sup_batch_size: int = 128,
    sup_lr: float = 0.01,
    ft_epochs: int = 20,
    ft_batch_size: int = 64,
    ft_lr: float | None = None,
):
    """Label pretrain then rate fine-tune.

    Returns (model, {"supervised": [...], "unsupervised": [...]}).
    """
    model, sup_history = train_supervised(
        bundle, spec, seed=seed, epochs=sup_epochs, batch_size=sup_batch_size, lr=sup_lr
    )
    model, ft_history = train_unsupervised(
        bundle,
        spec,
        settings,
        seed=seed,
        epochs=ft_epochs,
        batch_size=ft_batch_size,
        lr=ft_lr,
        model=model,
    )
    return model, {"supervised": sup_history, "unsupervised": ft_history}
