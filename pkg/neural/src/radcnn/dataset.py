"""Dataset assembly: channel tensor file + labels CSV -> training bundle.

The network consumes stacked real/imaginary planes: a channel tensor of
shape (S, K, N_f, N_P, N_R, N_T) becomes a float32 image batch of shape
(S, 2*N_f*N_P, K*N_R, N_T).  Plane (i*N_f + f)*N_P + p holds the real
(i=0) or imaginary (i=1) part of subcarrier f under mode p; the users'
receive antennas are concatenated along the image rows so the
convolutions see the multi-user structure spatially.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
import torch

from .tensorio import read_channel_tensor


class DatasetError(ValueError):
    """Raised when tensor and labels files disagree or are malformed."""


@dataclass
class DatasetBundle:
    """Channel tensor, derived images, exhaustive-search labels, and splits.

    ``images`` are per-plane standardized (zero mean, unit variance over
    the dataset) copies of the raw real/imaginary planes; the raw planes
    are always recoverable from ``tensor`` via :func:`make_images`.
    """

    tensor: np.ndarray  # (S, K, N_f, N_P, N_R, N_T) complex128
    images: torch.Tensor  # (S, 2*N_f*N_P, K*N_R, N_T) float32
    state_index: np.ndarray  # (S,) int64
    modes: np.ndarray  # (S, N_T) int64, 1-based digits
    se_exhaustive: np.ndarray  # (S,) float64
    splits: dict
    header: dict

    @property
    def n_samples(self) -> int:
        return self.tensor.shape[0]

    @property
    def n_users(self) -> int:
        return self.tensor.shape[1]

    @property
    def n_modes(self) -> int:
        return self.tensor.shape[3]

    @property
    def n_tx(self) -> int:
        return self.tensor.shape[5]

    def image_planes(self) -> int:
        return self.images.shape[1]


def make_images(tensor: np.ndarray) -> torch.Tensor:
    """Stack real and imaginary channel planes into a float32 image batch.

    Output shape (S, 2*N_f*N_P, K*N_R, N_T): real planes first, users
    concatenated down the image rows.
    """
    if tensor.ndim != 6:
        raise DatasetError(f"tensor must have 6 axes, got {tensor.ndim}")
    s, k, n_f, n_p, n_r, n_t = tensor.shape
    planes = np.stack([tensor.real, tensor.imag], axis=1)  # (S, 2, K, N_f, N_P, N_R, N_T)
    stacked = planes.transpose(0, 1, 3, 4, 2, 5, 6)  # (S, 2, N_f, N_P, K, N_R, N_T)
    images = stacked.reshape(s, 2 * n_f * n_p, k * n_r, n_t).astype(np.float32)
    return torch.from_numpy(images)


def standardize_images(images: torch.Tensor) -> torch.Tensor:
    """Zero-mean, unit-variance copy per plane.

    All-zero planes (e.g. imaginary parts of a real tensor) stay zero:
    their mean is zero and the variance floor avoids dividing by zero.
    """
    mean = images.mean(dim=(0, 2, 3), keepdim=True)
    std = images.std(dim=(0, 2, 3), keepdim=True).clamp_min(1e-12)
    return (images - mean) / std


def _read_labels(path, n_samples: int, n_tx: int):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if len(rows) != n_samples:
        raise DatasetError(
            f"sample count mismatch: tensor has {n_samples} samples, labels file has {len(rows)}"
        )
    mode_cols = [f"mode_{m}" for m in range(n_tx)]
    if rows and not all(c in rows[0] for c in mode_cols):
        raise DatasetError(
            f"labels file missing mode columns for {n_tx} transmit antennas: "
            f"expected {mode_cols}, got {sorted(rows[0])}"
        )
    state = np.empty(n_samples, dtype=np.int64)
    modes = np.empty((n_samples, n_tx), dtype=np.int64)
    se = np.empty(n_samples, dtype=np.float64)
    for i, row in enumerate(rows):
        if int(row["sample_id"]) != i:
            raise DatasetError(f"labels row {i} has sample_id {row['sample_id']}")
        state[i] = int(row["state_index"])
        modes[i] = [int(row[c]) for c in mode_cols]
        se[i] = float(row["se"])
    return state, modes, se


def split_indices(n_samples: int, fractions, seed: int) -> dict:
    """Disjoint train/val/test index sets from shuffled sample order."""
    if len(fractions) != 3:
        raise DatasetError("split must give three fractions (train, val, test)")
    if any(f < 0 for f in fractions) or abs(sum(fractions) - 1.0) > 1e-9:
        raise DatasetError(f"split fractions must be nonnegative and sum to 1, got {fractions}")
    perm = np.random.default_rng(seed).permutation(n_samples)
    n_train = int(n_samples * fractions[0])
    n_val = int(n_samples * fractions[1])
    return {
        "train": np.sort(perm[:n_train]),
        "val": np.sort(perm[n_train : n_train + n_val]),
        "test": np.sort(perm[n_train + n_val :]),
    }


def load_dataset(tensor_path, labels_path, split=(0.8, 0.1, 0.1), split_seed: int = 0) -> DatasetBundle:
    """Read a tensor file plus its labels CSV and build a training bundle."""
    tensor, header = read_channel_tensor(tensor_path)
    state, modes, se = _read_labels(labels_path, tensor.shape[0], tensor.shape[5])
    n_p = tensor.shape[3]
    bad = (modes < 1) | (modes > n_p)
    if bad.any():
        i = int(np.argwhere(bad.any(axis=1))[0][0])
        raise DatasetError(f"labels row {i} has mode digits outside 1..{n_p}: {modes[i].tolist()}")
    return DatasetBundle(
        tensor=tensor,
        images=standardize_images(make_images(tensor)),
        state_index=state,
        modes=modes,
        se_exhaustive=se,
        splits=split_indices(tensor.shape[0], split, split_seed),
        header=header,
    )


def halve_train(bundle: DatasetBundle) -> DatasetBundle:
    """Copy of the bundle keeping the first half of the train split.

    Validation and test indices are unchanged so models trained on half
    the data are scored on the same held-out samples.
    """
    train = bundle.splits["train"]
    splits = dict(bundle.splits)
    splits["train"] = train[: len(train) // 2]
    return DatasetBundle(
        tensor=bundle.tensor,
        images=bundle.images,
        state_index=bundle.state_index,
        modes=bundle.modes,
        se_exhaustive=bundle.se_exhaustive,
        splits=splits,
        header=bundle.header,
    )
