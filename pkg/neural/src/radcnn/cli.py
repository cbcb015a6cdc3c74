"""Command line front end: train and evaluate mode selectors.

Exit codes: 0 success, 2 invalid config or dataset, 3 infeasible link
dimensions, 4 filesystem errors.  Artifacts land in
<out-dir>/runs/<name>/.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from . import __version__
from .beamform import BdInfeasibleError
from .config import ConfigError, RunConfig, config_from_file
from .dataset import DatasetBundle, DatasetError, load_dataset
from .evaluate import evaluate
from .modeling import load_model, save_model, spec_for_variant
from .tensorio import TensorFormatError
from .training import train_semisupervised, train_unsupervised


def _resolve(base_dir: str, path: str) -> str:
    return path if os.path.isabs(path) else os.path.join(base_dir, path)


def _load_bundle(cfg: RunConfig, config_path: str) -> DatasetBundle:
    base = os.path.dirname(os.path.abspath(config_path))
    return load_dataset(
        _resolve(base, cfg.tensor),
        _resolve(base, cfg.labels),
        split=cfg.split,
        split_seed=cfg.split_seed,
    )


def _model_spec(cfg: RunConfig, bundle: DatasetBundle):
    spec = spec_for_variant(
        cfg.variant,
        n_tx=bundle.n_tx,
        n_modes=bundle.n_modes,
        in_planes=bundle.image_planes(),
        image_hw=bundle.images.shape[2:],
    )
    return dataclasses.replace(spec, alpha_max=cfg.train.alpha_max)


def _run_dir(out_dir: str, name: str) -> str:
    path = os.path.join(out_dir, "runs", name)
    os.makedirs(path, exist_ok=True)
    return path


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_history_csv(path: str, histories: dict) -> None:
    lines = ["epoch,phase,loss"]
    for phase, losses in histories.items():
        for epoch, loss in enumerate(losses, start=1):
            lines.append(f"{epoch},{phase},{loss!r}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _cmd_train(args) -> int:
    cfg = config_from_file(args.config)
    seed = cfg.seed if args.seed is None else args.seed
    if seed < 0:
        raise ConfigError(f"seed must be nonnegative, got {seed}")
    bundle = _load_bundle(cfg, args.config)
    spec = _model_spec(cfg, bundle)
    settings = cfg.link_settings()
    t = cfg.train
    if args.mode == "unsup":
        model, history = train_unsupervised(
            bundle, spec, settings, seed=seed,
            epochs=t.epochs, batch_size=t.batch_size, lr=t.lr,
        )
        histories = {"unsupervised": history}
    else:
        model, histories = train_semisupervised(
            bundle, spec, settings, seed=seed,
            sup_epochs=t.sup_epochs, sup_batch_size=t.sup_batch_size, sup_lr=t.sup_lr,
            ft_epochs=t.ft_epochs, ft_batch_size=t.ft_batch_size, ft_lr=t.lr,
        )
    run_dir = _run_dir(args.out_dir, cfg.name)
    save_model(os.path.join(run_dir, "model.pt"), model)
    _write_history_csv(os.path.join(run_dir, "loss_history.csv"), histories)
    metrics = {
        "kind": "train",
        "version": __version__,
        "mode": args.mode,
        "name": cfg.name,
        "seed": int(seed),
        "variant": cfg.variant,
        "alpha": model.alpha,
        "n_samples": bundle.n_samples,
        "train": evaluate(model, bundle, settings, split="train"),
        "test": evaluate(model, bundle, settings, split="test"),
    }
    _write_json(os.path.join(run_dir, "metrics.json"), metrics)
    print(f"trained {cfg.name} ({args.mode}): test ratio "
          f"{metrics['test']['exhaustive_ratio']:.4f} -> {run_dir}")
    return 0


def _cmd_eval(args) -> int:
    cfg = config_from_file(args.config)
    bundle = _load_bundle(cfg, args.config)
    model = load_model(args.model)
    metrics = {
        "kind": "eval",
        "version": __version__,
        "name": cfg.name,
        "model": os.path.basename(args.model),
        args.split: evaluate(model, bundle, cfg.link_settings(), split=args.split),
    }
    run_dir = _run_dir(args.out_dir, cfg.name)
    path = os.path.join(run_dir, f"eval-{args.split}.json")
    _write_json(path, metrics)
    print(f"evaluated {args.model} on {args.split}: ratio "
          f"{metrics[args.split]['exhaustive_ratio']:.4f} -> {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radcnn", description="Train convolutional antenna-mode selectors on exported channel tensors"
    )
    parser.add_argument("--version", action="version", version=f"radcnn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train a selector and write model + metrics")
    train.add_argument("--mode", choices=("unsup", "semisup"), default="unsup")
    train.add_argument("--config", required=True)
    train.add_argument("--out-dir", default=".")
    train.add_argument("--seed", type=int, default=None)
    train.set_defaults(func=_cmd_train)

    ev = sub.add_parser("eval", help="score a saved model on one split")
    ev.add_argument("--config", required=True)
    ev.add_argument("--model", required=True)
    ev.add_argument("--split", choices=("train", "val", "test"), default="test")
    ev.add_argument("--out-dir", default=".")
    ev.set_defaults(func=_cmd_eval)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DatasetError, TensorFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BdInfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
