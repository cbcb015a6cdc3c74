"""Experiment configuration: JSON schema, validation, canonical hashing.

Config files carry dB quantities where an operator would expect them; the
conversion to linear happens here, once, so the rest of the library only
ever sees linear values.  The canonical serialization (sorted keys, full
defaults) feeds a SHA-256 hash recorded next to every run output.
"""

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .geometry import (
    CircularTrajectory,
    GeometrySpec,
    LinearTrajectory,
    default_geometry,
)
from .precoding import LinkParams

_DEFAULT_LINEAR_WAYPOINTS = ((50.0, -40.0, 1.5), (50.0, 40.0, 1.5), (-30.0, 40.0, 1.5))
_DEFAULT_CIRCLE_CENTER = (55.0, 0.0, 1.5)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _require(cond: bool, message: str):
    if not cond:
        raise ConfigError(message)


def _take(section: dict, path: str, allowed: dict) -> dict:
    """Merge a config section over its defaults, rejecting unknown keys."""
    _require(isinstance(section, dict), f"{path} must be an object")
    merged = dict(allowed)
    for key, value in section.items():
        if key not in allowed:
            raise ConfigError(f"unknown config field {path}.{key}")
        merged[key] = value
    return merged


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated, fully-defaulted experiment description."""

    name: str = "run"
    scenario: str = "dynamic"
    seed: int = 0
    seeds: tuple[int, ...] = ()
    # geometry
    array_shape: tuple[int, int] = (2, 2)
    n_modes: int = 3
    rx_antennas: int = 2
    lobe_exponent: float = 2.0
    rician_k: float = 5.0
    # link
    rho_db: float = 15.0
    noise_power: float = 1.0
    n_rf: int = 4
    per_user_streams: tuple[int, ...] = (1, 1)
    # trajectory
    trajectory_kind: str = "linear"
    waypoints: tuple[tuple[float, float, float], ...] = _DEFAULT_LINEAR_WAYPOINTS
    circle_center: tuple[float, float, float] = _DEFAULT_CIRCLE_CENTER
    radius_m: float = 10.0
    speed_kmh: float = 30.0
    time_step_s: float = 0.01
    start_angle_deg: float = 0.0
    horizon: int = 2000
    # offline training
    k_clusters: int = 16
    pca_components: int = 8
    offline_snapshots: int = 64
    # policies
    gamma: float = 5.0
    ts_lam: float = 1.0
    ts_omega: float = 1.0
    ts_delta_s: float = 10.0
    ts_delta_f: float = 50.0
    # static scenario
    n_samples: int = 100
    distance_range_m: tuple[float, float] = (50.0, 100.0)
    # cluster sweep
    k_values: tuple[int, ...] = (4, 8, 16, 32)

    def __post_init__(self):
        _require(self.scenario in ("static", "dynamic"), "scenario must be static or dynamic")
        _require(self.seed >= 0, "seed must be >= 0")
        _require(all(s >= 0 for s in self.seeds), "seeds must be >= 0")
        _require(len(self.array_shape) == 2 and min(self.array_shape) >= 1, "geometry.array_shape invalid")
        _require(self.n_modes >= 1, "geometry.n_modes must be >= 1")
        _require(self.rx_antennas >= 1, "geometry.rx_antennas must be >= 1")
        _require(self.rician_k > 0, "geometry.rician_k must be > 0")
        _require(math.isfinite(self.rho_db), "link.rho_db must be finite")
        _require(self.noise_power > 0, "link.noise_power must be > 0")
        n_t = self.array_shape[0] * self.array_shape[1]
        _require(1 <= self.n_rf <= n_t, "link.n_rf must be in [1, n_tx]")
        _require(n_t % self.n_rf == 0, "link.n_rf must divide n_tx")
        _require(
            len(self.per_user_streams) >= 1 and all(s >= 1 for s in self.per_user_streams),
            "link.per_user_streams must be positive",
        )
        _require(self.trajectory_kind in ("linear", "circular"), "trajectory.kind must be linear or circular")
        _require(len(self.waypoints) >= 2, "trajectory.waypoints needs at least 2 points")
        _require(self.radius_m > 0, "trajectory.radius_m must be > 0")
        _require(self.speed_kmh > 0, "trajectory.speed_kmh must be > 0")
        _require(self.time_step_s > 0, "trajectory.time_step_s must be > 0")
        _require(self.horizon >= 1, "horizon must be >= 1")
        _require(self.k_clusters >= 1, "offline.k_clusters must be >= 1")
        _require(self.pca_components >= 1, "offline.pca_components must be >= 1")
        _require(self.offline_snapshots >= 2, "offline.snapshots must be >= 2")
        _require(self.gamma > 0, "policies.gamma must be > 0")
        _require(
            min(self.ts_lam, self.ts_omega, self.ts_delta_s, self.ts_delta_f) > 0,
            "policies.ts parameters must be > 0",
        )
        _require(self.n_samples >= 1, "static.n_samples must be >= 1")
        _require(
            len(self.distance_range_m) == 2 and 0 < self.distance_range_m[0] < self.distance_range_m[1],
            "static.distance_range_m must be an increasing positive pair",
        )
        _require(len(self.k_values) >= 1 and all(k >= 1 for k in self.k_values), "sweep.k_values invalid")

    @property
    def k_users(self) -> int:
        return len(self.per_user_streams)

    @property
    def n_tx(self) -> int:
        return self.array_shape[0] * self.array_shape[1]

    @property
    def speed_mps(self) -> float:
        return self.speed_kmh / 3.6

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        top = _take(
            doc,
            "config",
            {
                "name": "run",
                "scenario": "dynamic",
                "seed": 0,
                "seeds": [],
                "geometry": {},
                "link": {},
                "trajectory": {},
                "horizon": 2000,
                "offline": {},
                "policies": {},
                "static": {},
                "sweep": {},
            },
        )
        geo = _take(
            top["geometry"],
            "geometry",
            {
                "array_shape": [2, 2],
                "n_modes": 3,
                "rx_antennas": 2,
                "lobe_exponent": 2.0,
                "rician_k": 5.0,
            },
        )
        link = _take(
            top["link"],
            "link",
            {"rho_db": 15.0, "noise_power": 1.0, "n_rf": 4, "per_user_streams": [1, 1]},
        )
        traj = _take(
            top["trajectory"],
            "trajectory",
            {
                "kind": "linear",
                "waypoints": [list(w) for w in _DEFAULT_LINEAR_WAYPOINTS],
                "center": list(_DEFAULT_CIRCLE_CENTER),
                "radius_m": 10.0,
                "speed_kmh": 30.0,
                "time_step_s": 0.01,
                "start_angle_deg": 0.0,
            },
        )
        offline = _take(
            top["offline"],
            "offline",
            {"k_clusters": 16, "pca_components": 8, "snapshots": 64},
        )
        policies = _take(top["policies"], "policies", {"gamma": 5.0, "ts": {}})
        ts = _take(
            policies["ts"],
            "policies.ts",
            {"lam": 1.0, "omega": 1.0, "delta_s": 10.0, "delta_f": 50.0},
        )
        static = _take(
            top["static"],
            "static",
            {"n_samples": 100, "distance_range_m": [50.0, 100.0]},
        )
        sweep = _take(top["sweep"], "sweep", {"k_values": [4, 8, 16, 32]})

        try:
            return cls(
                name=str(top["name"]),
                scenario=str(top["scenario"]),
                seed=int(top["seed"]),
                seeds=tuple(int(s) for s in top["seeds"]),
                array_shape=tuple(int(v) for v in geo["array_shape"]),
                n_modes=int(geo["n_modes"]),
                rx_antennas=int(geo["rx_antennas"]),
                lobe_exponent=float(geo["lobe_exponent"]),
                rician_k=float(geo["rician_k"]),
                rho_db=float(link["rho_db"]),
                noise_power=float(link["noise_power"]),
                n_rf=int(link["n_rf"]),
                per_user_streams=tuple(int(s) for s in link["per_user_streams"]),
                trajectory_kind=str(traj["kind"]),
                waypoints=tuple(tuple(float(c) for c in w) for w in traj["waypoints"]),
                circle_center=tuple(float(c) for c in traj["center"]),
                radius_m=float(traj["radius_m"]),
                speed_kmh=float(traj["speed_kmh"]),
                time_step_s=float(traj["time_step_s"]),
                start_angle_deg=float(traj["start_angle_deg"]),
                horizon=int(top["horizon"]),
                k_clusters=int(offline["k_clusters"]),
                pca_components=int(offline["pca_components"]),
                offline_snapshots=int(offline["snapshots"]),
                gamma=float(policies["gamma"]),
                ts_lam=float(ts["lam"]),
                ts_omega=float(ts["omega"]),
                ts_delta_s=float(ts["delta_s"]),
                ts_delta_f=float(ts["delta_f"]),
                n_samples=int(static["n_samples"]),
                distance_range_m=tuple(float(v) for v in static["distance_range_m"]),
                k_values=tuple(int(k) for k in sweep["k_values"]),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"malformed config value: {exc}") from exc

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(doc)

    def to_canonical_dict(self) -> dict:
        return {
            "name": self.name,
            "scenario": self.scenario,
            "seed": self.seed,
            "seeds": list(self.seeds),
            "geometry": {
                "array_shape": list(self.array_shape),
                "n_modes": self.n_modes,
                "rx_antennas": self.rx_antennas,
                "lobe_exponent": self.lobe_exponent,
                "rician_k": self.rician_k,
            },
            "link": {
                "rho_db": self.rho_db,
                "noise_power": self.noise_power,
                "n_rf": self.n_rf,
                "per_user_streams": list(self.per_user_streams),
            },
            "trajectory": {
                "kind": self.trajectory_kind,
                "waypoints": [list(w) for w in self.waypoints],
                "center": list(self.circle_center),
                "radius_m": self.radius_m,
                "speed_kmh": self.speed_kmh,
                "time_step_s": self.time_step_s,
                "start_angle_deg": self.start_angle_deg,
            },
            "horizon": self.horizon,
            "offline": {
                "k_clusters": self.k_clusters,
                "pca_components": self.pca_components,
                "snapshots": self.offline_snapshots,
            },
            "policies": {
                "gamma": self.gamma,
                "ts": {
                    "lam": self.ts_lam,
                    "omega": self.ts_omega,
                    "delta_s": self.ts_delta_s,
                    "delta_f": self.ts_delta_f,
                },
            },
            "static": {
                "n_samples": self.n_samples,
                "distance_range_m": list(self.distance_range_m),
            },
            "sweep": {"k_values": list(self.k_values)},
        }

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_canonical_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()

    def run_seeds(self) -> tuple[int, ...]:
        return self.seeds if self.seeds else (self.seed,)

    def geometry(self) -> GeometrySpec:
        return default_geometry(
            n_modes=self.n_modes,
            array_shape=self.array_shape,
            rx_antennas=self.rx_antennas,
            lobe_exponent=self.lobe_exponent,
            rician_k=self.rician_k,
        )

    def link_params(self) -> LinkParams:
        return LinkParams(
            rho=db_to_linear(self.rho_db),
            noise_power=self.noise_power,
            per_user_streams=self.per_user_streams,
        )

    def build_trajectory(self, num_steps: int | None = None):
        steps = self.horizon if num_steps is None else num_steps
        if self.trajectory_kind == "linear":
            return LinearTrajectory(
                waypoints=self.waypoints,
                speed_mps=self.speed_mps,
                time_step_s=self.time_step_s,
                num_steps=steps,
            )
        return CircularTrajectory(
            center=self.circle_center,
            radius_m=self.radius_m,
            speed_mps=self.speed_mps,
            time_step_s=self.time_step_s,
            num_steps=steps,
            start_angle_rad=math.radians(self.start_angle_deg),
        )

    def fixed_user_positions(self, count: int, rng: np.random.Generator) -> list[tuple[float, float, float]]:
        """Extra users dropped uniformly in the configured distance annulus."""
        lo, hi = self.distance_range_m
        out = []
        for _ in range(count):
            radius = rng.uniform(lo, hi)
            angle = rng.uniform(0.0, 2.0 * math.pi)
            out.append((radius * math.cos(angle), radius * math.sin(angle), 1.5))
        return out
