import json

import numpy as np
import pytest

from ramsel import (
    CircularTrajectory,
    ConfigError,
    ExperimentConfig,
    LinearTrajectory,
    db_to_linear,
)


def test_defaults_construct():
    cfg = ExperimentConfig()
    assert cfg.scenario == "dynamic"
    assert cfg.array_shape == (2, 2)
    assert cfg.n_modes == 3
    assert cfg.horizon == 2000


def test_from_dict_nested_sections():
    cfg = ExperimentConfig.from_dict(
        {
            "name": "demo",
            "seed": 7,
            "geometry": {"array_shape": [2, 2], "n_modes": 2, "rician_k": 3.0},
            "link": {"rho_db": 10.0, "n_rf": 4, "per_user_streams": [1, 1]},
            "trajectory": {"kind": "circular", "radius_m": 20.0},
            "offline": {"k_clusters": 8, "pca_components": 4},
            "policies": {"gamma": 2.0, "ts": {"delta_s": 5.0}},
        }
    )
    assert cfg.name == "demo"
    assert cfg.n_modes == 2
    assert cfg.rician_k == 3.0
    assert cfg.rho_db == 10.0
    assert cfg.trajectory_kind == "circular"
    assert cfg.radius_m == 20.0
    assert cfg.k_clusters == 8
    assert cfg.gamma == 2.0
    assert cfg.ts_delta_s == 5.0


def test_unknown_field_names_path():
    with pytest.raises(ConfigError, match="geometry.bogus"):
        ExperimentConfig.from_dict({"geometry": {"bogus": 1}})
    with pytest.raises(ConfigError, match="policies.ts.nope"):
        ExperimentConfig.from_dict({"policies": {"ts": {"nope": 1}}})
    with pytest.raises(ConfigError, match="stray"):
        ExperimentConfig.from_dict({"stray": True})


def test_validation_errors():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"geometry": {"n_modes": 0}})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"link": {"rho_db": float("nan")}})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"scenario": "both"})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"seed": -1})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"link": {"n_rf": 3}})  # must divide n_tx = 4


def test_db_conversion():
    assert db_to_linear(0.0) == pytest.approx(1.0)
    assert db_to_linear(10.0) == pytest.approx(10.0)
    assert db_to_linear(15.0) == pytest.approx(10.0 ** 1.5, rel=1e-12)
    cfg = ExperimentConfig.from_dict({"link": {"rho_db": 15.0}})
    assert cfg.link_params().rho == pytest.approx(10.0 ** 1.5, rel=1e-12)


def test_config_hash_stable_and_sensitive():
    a = ExperimentConfig.from_dict({"seed": 1})
    b = ExperimentConfig.from_dict({"seed": 1})
    c = ExperimentConfig.from_dict({"seed": 2})
    assert a.config_hash() == b.config_hash()
    assert a.config_hash() != c.config_hash()
    assert len(a.config_hash()) == 64


def test_canonical_dict_round_trip():
    cfg = ExperimentConfig.from_dict({"name": "x", "geometry": {"n_modes": 2}})
    doc = cfg.to_canonical_dict()
    assert ExperimentConfig.from_dict(doc) == cfg
    json.dumps(doc)  # must be JSON serializable


def test_from_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"name": "filed", "seed": 3}))
    cfg = ExperimentConfig.from_file(path)
    assert cfg.name == "filed"
    assert cfg.seed == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(bad)


def test_trajectory_construction():
    lin = ExperimentConfig.from_dict({"trajectory": {"kind": "linear"}}).build_trajectory()
    assert isinstance(lin, LinearTrajectory)
    circ = ExperimentConfig.from_dict({"trajectory": {"kind": "circular"}}).build_trajectory()
    assert isinstance(circ, CircularTrajectory)


def test_run_seeds_explicit_and_derived():
    cfg = ExperimentConfig.from_dict({"seeds": [4, 5, 6]})
    assert cfg.run_seeds() == (4, 5, 6)
    solo = ExperimentConfig.from_dict({"seed": 9})
    assert solo.run_seeds() == (9,)


def test_fixed_user_positions_in_annulus():
    cfg = ExperimentConfig.from_dict({"static": {"distance_range_m": [50.0, 100.0]}})
    rng = np.random.default_rng(0)
    pos = np.asarray(cfg.fixed_user_positions(64, rng))
    assert pos.shape == (64, 3)
    dist = np.linalg.norm(pos[:, :2], axis=1)
    assert np.all(dist >= 50.0 - 1e-9)
    assert np.all(dist <= 100.0 + 1e-9)
    assert np.allclose(pos[:, 2], 1.5)


def test_geometry_matches_config():
    cfg = ExperimentConfig.from_dict(
        {"geometry": {"array_shape": [2, 2], "n_modes": 2, "lobe_exponent": 3.0}}
    )
    geom = cfg.geometry()
    assert geom.array_shape == (2, 2)
    assert len(geom.mode_patterns) == 2
    assert geom.mode_patterns[0].lobe_exponent == 3.0
