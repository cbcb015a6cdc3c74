"""Shared fixtures: datasets exported through the simulator CLI.

The selector consumes only the exported artifacts (tensor file + labels
CSV), so every fixture shells out to `ramsel export-dataset` exactly the
way a user would.
"""

import json
import subprocess

import pytest

from radcnn import LinkSettings, db_to_linear, load_dataset


def export_dataset(tmp_dir, name, config):
    cfg_path = tmp_dir / f"{name}.json"
    cfg_path.write_text(json.dumps(config))
    subprocess.run(
        ["ramsel", "export-dataset", "--config", str(cfg_path), "--out-dir", str(tmp_dir)],
        check=True,
        capture_output=True,
    )
    run_dir = tmp_dir / "runs" / config["name"]
    return run_dir / "dataset.ract", run_dir / "labels.csv"


SMALL_RHO_DB = 15.0

SMALL_CONFIG = {
    "name": "small",
    "seed": 9,
    "geometry": {"array_shape": [2, 2], "n_modes": 2, "rx_antennas": 2},
    "link": {"n_rf": 4, "per_user_streams": [1, 1], "rho_db": SMALL_RHO_DB},
    "static": {"n_samples": 240},
}

NP1_CONFIG = {
    "name": "np1",
    "seed": 3,
    "geometry": {"array_shape": [2, 2], "n_modes": 1, "rx_antennas": 1},
    "link": {"n_rf": 4, "per_user_streams": [1, 1], "rho_db": SMALL_RHO_DB},
    "static": {"n_samples": 60},
}


@pytest.fixture(scope="session")
def dataset_exporter():
    """The export helper as a fixture, for test modules in other dirs."""
    return export_dataset


@pytest.fixture(scope="session")
def small_paths(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("small-ds")
    return export_dataset(tmp, "small", SMALL_CONFIG)


@pytest.fixture(scope="session")
def small_bundle(small_paths):
    return load_dataset(*small_paths)


@pytest.fixture(scope="session")
def small_settings():
    return LinkSettings(rho=db_to_linear(SMALL_RHO_DB), per_user_streams=(1, 1), n_rf=4)


@pytest.fixture(scope="session")
def np1_bundle(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("np1-ds")
    return load_dataset(*export_dataset(tmp, "np1", NP1_CONFIG))
