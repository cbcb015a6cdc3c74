"""Command-line front end.

Subcommands map one-to-one onto the harness entry points; every run lands
in ``<out-dir>/runs/<name>/``.  dB-valued config fields are converted to
linear inside the config layer, so the CLI surface is the only place dB
appears.

Exit codes: 0 success, 2 bad config, 3 infeasible problem, 4 I/O failure.
"""

import argparse
import os
import sys

import numpy as np

from ._version import __version__
from .config import ExperimentConfig
from .errors import ConfigError, InfeasibleError
from .harness import (
    build_offline_model,
    export_dataset,
    run_cluster_sweep,
    run_dynamic,
    run_static,
    write_summary_json,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramsel",
        description="RA mode selection experiments: static search, bandit-driven dynamic selection, cluster sweeps and dataset export.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("static", "static benchmark: exhaustive vs random over user placements"),
        ("offline", "build and save the offline cluster model"),
        ("dynamic", "trajectory run with bandit policies and baselines"),
        ("sweep-clusters", "dynamic runs across a range of cluster counts"),
        ("export-dataset", "write channel tensor and exhaustive labels"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", metavar="JSON", help="path to a JSON config file")
        cmd.add_argument("--seed", type=int, default=None, help="override the config seed")
        cmd.add_argument("--out-dir", default=".", help="base directory for run outputs")
    return parser


def _load_config(args) -> ExperimentConfig:
    if args.config is None:
        config = ExperimentConfig()
    else:
        config = ExperimentConfig.from_file(args.config)
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("seed must be >= 0")
        doc = config.to_canonical_dict()
        doc["seed"] = args.seed
        doc["seeds"] = []
        config = ExperimentConfig.from_dict(doc)
    return config


def _run_dir(args, config: ExperimentConfig) -> str:
    return os.path.join(args.out_dir, "runs", config.name)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load_config(args)
        run_dir = _run_dir(args, config)

        if args.command == "static":
            record = run_static(config, out_dir=run_dir)
            print(f"static: {record.extra['n_samples']} samples -> {run_dir}")
        elif args.command == "offline":
            model = build_offline_model(config, config.seed)
            os.makedirs(run_dir, exist_ok=True)
            model.save(os.path.join(run_dir, "cluster_model.json"))
            write_summary_json(
                os.path.join(run_dir, "summary.json"),
                {
                    "kind": "offline",
                    "config_hash": config.config_hash(),
                    "version": __version__,
                    "seed": config.seed,
                    "n_arms": model.n_arms,
                    "representatives": list(model.representatives),
                    "reward_stats": [model.reward_stats[0], model.reward_stats[1]],
                },
            )
            print(f"offline: {model.n_arms} representatives -> {run_dir}")
        elif args.command == "dynamic":
            seeds = config.run_seeds()
            if len(seeds) == 1:
                run_dynamic(config, seeds[0], out_dir=run_dir)
            else:
                finals = {}
                for seed in seeds:
                    record = run_dynamic(config, seed, out_dir=os.path.join(run_dir, f"seed-{seed}"))
                    for m, trace in record.methods.items():
                        finals.setdefault(m, []).append(float(trace.cum_reward[-1]))
                write_summary_json(
                    os.path.join(run_dir, "summary.json"),
                    {
                        "kind": "dynamic-multi",
                        "config_hash": config.config_hash(),
                        "version": __version__,
                        "seeds": list(seeds),
                        "median_final_cum_reward": {
                            m: float(np.median(v)) for m, v in finals.items()
                        },
                    },
                )
            print(f"dynamic: horizon {config.horizon}, seeds {list(seeds)} -> {run_dir}")
        elif args.command == "sweep-clusters":
            rows, _ = run_cluster_sweep(config, out_dir=run_dir)
            print(f"sweep-clusters: k values {[r['k'] for r in rows]} -> {run_dir}")
        elif args.command == "export-dataset":
            tensor_path, labels_path = export_dataset(config, run_dir)
            print(f"export-dataset: {tensor_path} + {labels_path}")
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
