"""Run configuration for training and evaluation.

A config JSON names the dataset files, the selector variant, the link
budget used inside the rate objective, and training overrides.  The link
section must describe the same system the dataset was exported with;
`evaluate` scores against the labels, so a mismatch shows up as a rate
gap rather than silent corruption.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .beamform import LinkSettings, db_to_linear


class ConfigError(ValueError):
    """Raised for unknown fields or invalid values in a run config."""


@dataclass(frozen=True)
class TrainOverrides:
    epochs: int | None = None
    batch_size: int | None = None
    lr: float | None = None
    alpha_max: float = 20.0
    sup_epochs: int = 20
    sup_batch_size: int = 128
    sup_lr: float = 0.01
    ft_epochs: int = 20
    ft_batch_size: int = 64


@dataclass(frozen=True)
class RunConfig:
    name: str = "dcnn"
    seed: int = 0
    tensor: str = "dataset.ract"
    labels: str = "labels.csv"
    variant: str = "mu"
    split: tuple = (0.8, 0.1, 0.1)
    split_seed: int = 0
    rho_db: float = 15.0
    noise_power: float = 1.0
    n_rf: int = 4
    per_user_streams: tuple = (1, 1)
    train: TrainOverrides = field(default_factory=TrainOverrides)

    def link_settings(self) -> LinkSettings:
        return LinkSettings(
            rho=db_to_linear(self.rho_db),
            per_user_streams=tuple(int(s) for s in self.per_user_streams),
            n_rf=self.n_rf,
            noise_power=self.noise_power,
        )


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def _take(d: dict, section: str):
    def get(key, default):
        return d.pop(key, default)

    def done():
        if d:
            where = f"{section}." if section else ""
            raise ConfigError(f"unknown config field {where}{sorted(d)[0]}")

    return get, done


def config_from_dict(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    d = dict(raw)
    get, done = _take(d, "")
    link = dict(get("link", {}))
    train = dict(get("train", {}))
    cfg_kw = dict(
        name=str(get("name", "dcnn")),
        seed=int(get("seed", 0)),
        tensor=str(get("tensor", "dataset.ract")),
        labels=str(get("labels", "labels.csv")),
        variant=str(get("variant", "mu")),
        split=tuple(float(x) for x in get("split", (0.8, 0.1, 0.1))),
        split_seed=int(get("split_seed", 0)),
    )
    done()

    lget, ldone = _take(link, "link")
    cfg_kw.update(
        rho_db=float(lget("rho_db", 15.0)),
        noise_power=float(lget("noise_power", 1.0)),
        n_rf=int(lget("n_rf", 4)),
        per_user_streams=tuple(int(s) for s in lget("per_user_streams", (1, 1))),
    )
    ldone()

    tget, tdone = _take(train, "train")
    epochs = tget("epochs", None)
    batch_size = tget("batch_size", None)
    lr = tget("lr", None)
    overrides = TrainOverrides(
        epochs=None if epochs is None else int(epochs),
        batch_size=None if batch_size is None else int(batch_size),
        lr=None if lr is None else float(lr),
        alpha_max=float(tget("alpha_max", 20.0)),
        sup_epochs=int(tget("sup_epochs", 20)),
        sup_batch_size=int(tget("sup_batch_size", 128)),
        sup_lr=float(tget("sup_lr", 0.01)),
        ft_epochs=int(tget("ft_epochs", 20)),
        ft_batch_size=int(tget("ft_batch_size", 64)),
    )
    tdone()

    cfg = RunConfig(train=overrides, **cfg_kw)
    _require(cfg.name != "", "name must be nonempty")
    _require(cfg.seed >= 0, f"seed must be nonnegative, got {cfg.seed}")
    _require(cfg.variant in ("su", "mu"), f"variant must be 'su' or 'mu', got {cfg.variant!r}")
    _require(math.isfinite(cfg.rho_db), "link.rho_db must be finite")
    _require(cfg.noise_power > 0, f"link.noise_power must be positive, got {cfg.noise_power}")
    _require(cfg.n_rf > 0, f"link.n_rf must be positive, got {cfg.n_rf}")
    _require(
        len(cfg.per_user_streams) > 0 and all(s > 0 for s in cfg.per_user_streams),
        "link.per_user_streams must be positive integers",
    )
    _require(len(cfg.split) == 3, "split must list three fractions")
    _require(
        all(f >= 0 for f in cfg.split) and abs(sum(cfg.split) - 1.0) <= 1e-9,
        f"split fractions must be nonnegative and sum to 1, got {list(cfg.split)}",
    )
    _require(cfg.split[0] > 0, "split must reserve a nonempty train fraction")
    _require(cfg.split_seed >= 0, f"split_seed must be nonnegative, got {cfg.split_seed}")
    for fname, value in (
        ("alpha_max", overrides.alpha_max),
        ("sup_lr", overrides.sup_lr),
    ):
        _require(value > 0, f"train.{fname} must be positive, got {value}")
    for fname, value in (
        ("sup_epochs", overrides.sup_epochs),
        ("sup_batch_size", overrides.sup_batch_size),
        ("ft_epochs", overrides.ft_epochs),
        ("ft_batch_size", overrides.ft_batch_size),
    ):
        _require(value > 0, f"train.{fname} must be positive, got {value}")
    return cfg


def config_from_file(path) -> RunConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return config_from_dict(raw)
