"""Reconfigurable-antenna mode selection for multi-user MIMO downlink.

Per-mode channel synthesis, block-diagonalization beamforming, spectral
efficiency evaluation, exhaustive static selection, and bandit-driven
dynamic selection over PCA/K-means representative states.
"""

from ._version import __version__
from .channel import (
    ChannelSet,
    effective_channel,
    effective_channels_all_users,
    generate_channels,
    state_feature_vector,
)
from .config import ExperimentConfig, db_to_linear
from .errors import (
    BdInfeasibleError,
    ConfigError,
    InfeasibleError,
    RamselError,
    SearchCapError,
)
from .evaluate import evaluate_assignment, se_table
from .geometry import (
    CircularTrajectory,
    GeometrySpec,
    LinearTrajectory,
    ModePattern,
    PathSpec,
    Scatterer,
    default_geometry,
    default_mode_patterns,
)
from .harness import (
    RunRecord,
    export_dataset,
    run_cluster_sweep,
    run_dynamic,
    run_static,
)
from .mab import (
    PolicyState,
    TsParams,
    UcbParams,
    normalize_reward,
    ts_sample_beliefs,
    ts_step,
    ucb_select,
    ucb_update,
)
from .modes import ModeAssignment, enumerate_mode_digits, num_states
from .offline import (
    ClusterModel,
    build_cluster_model,
    diagnose_cluster_count,
    kmeans,
    pca_fit,
    pca_project,
    silhouette,
    state_feature_matrix,
)
from .precoding import (
    BeamformerPair,
    LinkParams,
    bd_beamformer,
    default_rf_selector,
    spectral_efficiency,
)
from .selection import (
    SelectionResult,
    annealed_softmax,
    exhaustive_search,
    project_to_one_hot,
    random_assignment,
    random_selection,
)
from .tensorio import read_channel_tensor, write_channel_tensor

__all__ = [
    "__version__",
    "BdInfeasibleError",
    "BeamformerPair",
    "ChannelSet",
    "CircularTrajectory",
    "ClusterModel",
    "ConfigError",
    "ExperimentConfig",
    "GeometrySpec",
    "InfeasibleError",
    "LinearTrajectory",
    "LinkParams",
    "ModeAssignment",
    "ModePattern",
    "PathSpec",
    "PolicyState",
    "RamselError",
    "RunRecord",
    "Scatterer",
    "SearchCapError",
    "SelectionResult",
    "TsParams",
    "UcbParams",
    "annealed_softmax",
    "bd_beamformer",
    "build_cluster_model",
    "db_to_linear",
    "default_geometry",
    "default_mode_patterns",
    "default_rf_selector",
    "diagnose_cluster_count",
    "effective_channel",
    "effective_channels_all_users",
    "enumerate_mode_digits",
    "evaluate_assignment",
    "exhaustive_search",
    "export_dataset",
    "generate_channels",
    "kmeans",
    "normalize_reward",
    "num_states",
    "pca_fit",
    "pca_project",
    "project_to_one_hot",
    "random_assignment",
    "random_selection",
    "read_channel_tensor",
    "run_cluster_sweep",
    "run_dynamic",
    "run_static",
    "se_table",
    "silhouette",
    "spectral_efficiency",
    "state_feature_matrix",
    "state_feature_vector",
    "ts_sample_beliefs",
    "ts_step",
    "ucb_select",
    "ucb_update",
    "write_channel_tensor",
]
