"""Model evaluation against exhaustive-search labels."""

from __future__ import annotations

import numpy as np
import torch

from .beamform import LinkSettings, rf_selector, se_objective
from .dataset import DatasetBundle
from .modeling import ModeSelector, hard_weights, selected_modes


def evaluate(
    model: ModeSelector,
    bundle: DatasetBundle,
    settings: LinkSettings,
    split: str = "test",
    alpha: float | None = None,
) -> dict:
    """Score a trained selector on one split.

    se_continuous uses the soft probability rows at the model's trained
    anneal factor (or an override), se_discrete projects each row to its
    argmax mode, and exhaustive_ratio divides the discrete mean by the
    mean exhaustive-search rate of the same samples.
    """
    idx = bundle.splits[split]
    if len(idx) == 0:
        raise ValueError(f"split {split!r} is empty")
    channels = torch.from_numpy(bundle.tensor[idx])
    f_rf = rf_selector(bundle.n_tx, settings.n_rf)
    model.eval()
    with torch.no_grad():
        probs = model(bundle.images[idx], alpha)
        se_cont = se_objective(channels, probs, f_rf, settings)
        se_disc = se_objective(channels, hard_weights(probs), f_rf, settings)
        modes = selected_modes(probs).numpy()
    exhaustive = bundle.se_exhaustive[idx]
    label_acc = float(np.mean(np.all(modes == bundle.modes[idx], axis=1)))
    return {
        "split": split,
        "n_samples": int(len(idx)),
        "se_continuous": float(se_cont.mean()),
        "se_discrete": float(se_disc.mean()),
        "se_exhaustive": float(exhaustive.mean()),
        "exhaustive_ratio": float(se_disc.mean() / exhaustive.mean()),
        "label_accuracy": label_acc,
    }


def random_selection_rate(
    bundle: DatasetBundle, settings: LinkSettings, split: str, seed: int = 0
) -> float:
    """Mean rate of uniformly random mode digits, as a floor baseline."""
    idx = bundle.splits[split]
    rng = np.random.default_rng(seed)
    digits = rng.integers(1, bundle.n_modes + 1, size=(len(idx), bundle.n_tx))
    weights = torch.nn.functional.one_hot(
        torch.from_numpy(digits - 1), bundle.n_modes
    ).to(torch.float64)
    channels = torch.from_numpy(bundle.tensor[idx])
    f_rf = rf_selector(bundle.n_tx, settings.n_rf)
    with torch.no_grad():
        se = se_objective(channels, weights, f_rf, settings)
    return float(se.mean())
