"""Convolutional mode selection for reconfigurable antenna arrays.

Consumes channel tensor files and exhaustive-search label CSVs exported
by the simulator CLI; trains a DCNN that picks one radiation mode per
transmit antenna to maximize multi-user spectral efficiency.
"""

__version__ = "0.1.0"

from .beamform import (
    BdInfeasibleError,
    LinkSettings,
    bd_beamformer,
    db_to_linear,
    one_hot_weights,
    rf_selector,
    se_objective,
    soft_effective_channels,
    spectral_efficiency,
)
from .config import ConfigError, RunConfig, TrainOverrides, config_from_dict, config_from_file
from .dataset import (
    DatasetBundle,
    DatasetError,
    halve_train,
    load_dataset,
    make_images,
    split_indices,
    standardize_images,
)
from .evaluate import evaluate, random_selection_rate
from .modeling import (
    ModelSpec,
    ModeSelector,
    annealed_softmax,
    hard_weights,
    load_model,
    one_hot_targets_from_modes,
    save_model,
    selected_modes,
    spec_for_variant,
)
from .tensorio import TensorFormatError, read_channel_tensor
from .training import (
    TrainingDivergedError,
    anneal_factor,
    train_semisupervised,
    train_supervised,
    train_unsupervised,
)

__all__ = [
    "BdInfeasibleError",
    "ConfigError",
    "DatasetBundle",
    "DatasetError",
    "LinkSettings",
    "ModeSelector",
    "ModelSpec",
    "RunConfig",
    "TensorFormatError",
    "TrainOverrides",
    "TrainingDivergedError",
    "anneal_factor",
    "annealed_softmax",
    "bd_beamformer",
    "config_from_dict",
    "config_from_file",
    "db_to_linear",
    "evaluate",
    "halve_train",
    "hard_weights",
    "load_dataset",
    "load_model",
    "make_images",
    "one_hot_targets_from_modes",
    "one_hot_weights",
    "random_selection_rate",
    "read_channel_tensor",
    "rf_selector",
    "save_model",
    "se_objective",
    "selected_modes",
    "soft_effective_channels",
    "spec_for_variant",
    "spectral_efficiency",
    "split_indices",
    "standardize_images",
    "train_semisupervised",
    "train_supervised",
    "train_unsupervised",
]
