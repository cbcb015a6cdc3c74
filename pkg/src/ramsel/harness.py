"""Experiment orchestration: static benchmark, dynamic trajectory runs
with all baselines, cluster-count sweep, and dataset export.

Every run is a pure function of (config, seed): RNG streams are derived
from tagged seed sequences, cumulative columns are prefix sums in a fixed
order, and files are written with repr-exact floats, so reruns are
bitwise identical.
"""

import json
import os
from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .channel import ChannelSet, generate_channels
from .config import ExperimentConfig
from .errors import BdInfeasibleError
from .evaluate import evaluate_assignment, se_table
from .mab import (
    PolicyState,
    TsParams,
    UcbParams,
    normalize_reward,
    ts_step,
    ucb_select,
    ucb_update,
)
from .modes import ModeAssignment, num_states
from .offline import ClusterModel, build_cluster_model
from .precoding import default_rf_selector
from .selection import exhaustive_search, random_assignment
from .tensorio import quantize_c64, write_channel_tensor

DYNAMIC_METHODS = ("max_all", "max_selected", "ucb", "ts", "random")
STATIC_METHODS = ("exhaustive", "random")

# stream tags so every random decision has its own derived seed
_TAG_ONLINE, _TAG_OFFLINE, _TAG_MODEL, _TAG_TS, _TAG_RANDOM, _TAG_USERS, _TAG_SAMPLE = range(7)


def _rng(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *tags]))


def _seq(seed: int, *tags: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed), *tags])


@dataclass(frozen=True)
class MethodTrace:
    """Per-step outputs of one method; cumulative columns are exact prefix
    sums of the per-step ones."""

    state: np.ndarray
    se: np.ndarray
    reward: np.ndarray | None = None

    @property
    def cum_se(self) -> np.ndarray:
        return np.cumsum(self.se)

    @property
    def cum_reward(self) -> np.ndarray | None:
        return None if self.reward is None else np.cumsum(self.reward)


@dataclass(frozen=True)
class RunRecord:
    """One experiment's full trace plus identifying metadata."""

    kind: str
    seed: int
    config_hash: str
    methods: dict[str, MethodTrace]
    extra: dict = field(default_factory=dict)
    version: str = __version__

    def summary_dict(self) -> dict:
        methods = {}
        for name, trace in self.methods.items():
            entry = {
                "mean_se": float(np.mean(trace.se)),
                "final_cum_se": float(trace.cum_se[-1]),
            }
            if trace.reward is not None:
                entry["mean_reward"] = float(np.mean(trace.reward))
                entry["final_cum_reward"] = float(trace.cum_reward[-1])
            methods[name] = entry
        return {
            "kind": self.kind,
            "seed": self.seed,
            "config_hash": self.config_hash,
            "version": self.version,
            "steps": int(len(next(iter(self.methods.values())).se)),
            "methods": methods,
            **self.extra,
        }


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_trace_csv(path, record: RunRecord, index_name: str):
    """Trace table: one row per step, method columns in a fixed order."""
    names = list(record.methods)
    header = [index_name]
    for m in names:
        header += [f"{m}_state", f"{m}_se", f"{m}_cum_se"]
        if record.methods[m].reward is not None:
            header += [f"{m}_reward", f"{m}_cum_reward"]
    columns = {}
    for m in names:
        tr = record.methods[m]
        columns[m] = (tr.state, tr.se, tr.cum_se, tr.reward, tr.cum_reward)
    steps = len(next(iter(record.methods.values())).se)
    lines = [",".join(header)]
    for t in range(steps):
        row = [str(t)]
        for m in names:
            state, se, cum_se, reward, cum_reward = columns[m]
            row += [_fmt(state[t]), _fmt(se[t]), _fmt(cum_se[t])]
            if reward is not None:
                row += [_fmt(reward[t]), _fmt(cum_reward[t])]
        lines.append(",".join(row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_summary_json(path, doc: dict):
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _dynamic_users(config: ExperimentConfig, seed: int):
    """User 0 rides the trajectory; the rest sit at seeded fixed spots."""
    extra = config.fixed_user_positions(config.k_users - 1, _rng(seed, _TAG_USERS))
    return [None] + extra


def offline_snapshot_indices(config: ExperimentConfig) -> np.ndarray:
    """Snapshots spread evenly over the horizon for offline training."""
    count = min(config.offline_snapshots, config.horizon)
    return np.unique(np.linspace(0, config.horizon - 1, count).round().astype(int))


def build_offline_model(config: ExperimentConfig, seed: int) -> ClusterModel:
    """Offline phase on its own channel realization (same geometry, user
    placement and trajectory; independent fading draws)."""
    geometry = config.geometry()
    params = config.link_params()
    f_rf = default_rf_selector(config.n_tx, config.n_rf)
    trajectory = config.build_trajectory()
    users = _dynamic_users(config, seed)
    channels = generate_channels(geometry, trajectory, users, _seq(seed, _TAG_OFFLINE))
    snaps = offline_snapshot_indices(config)
    return build_cluster_model(
        channels,
        snaps,
        config.pca_components,
        config.k_clusters,
        _seq(seed, _TAG_MODEL),
        f_rf,
        params,
    )


def se_tables_for_run(config: ExperimentConfig, seed: int) -> np.ndarray:
    """(horizon, n_states) SE of every state at every online step."""
    geometry = config.geometry()
    params = config.link_params()
    f_rf = default_rf_selector(config.n_tx, config.n_rf)
    trajectory = config.build_trajectory()
    users = _dynamic_users(config, seed)
    channels = generate_channels(geometry, trajectory, users, _seq(seed, _TAG_ONLINE))
    return np.vstack(
        [se_table(channels, t, f_rf, params) for t in range(config.horizon)]
    )


def _dynamic_record(config, seed, model, tables) -> RunRecord:
    """Run all five methods against a shared per-step SE table so the
    dominance relations between them are exact by construction."""
    n_t = config.n_tx
    n_p = config.n_modes
    horizon = tables.shape[0]
    stats = model.reward_stats
    reps = np.asarray(model.representatives)
    reps_sorted = np.sort(reps)

    ucb_state = PolicyState.fresh(model.n_arms)
    ucb_params = UcbParams(gamma=config.gamma)
    ts_state = PolicyState.fresh(model.n_arms)
    ts_params = TsParams(config.ts_lam, config.ts_omega, config.ts_delta_s, config.ts_delta_f)
    ts_rng = _rng(seed, _TAG_TS)
    random_rng = _rng(seed, _TAG_RANDOM)

    out = {m: {"state": [], "se": [], "reward": []} for m in DYNAMIC_METHODS}

    def record(method, state, se):
        out[method]["state"].append(int(state))
        out[method]["se"].append(float(se))
        out[method]["reward"].append(normalize_reward(se, stats))

    for t in range(horizon):
        table = tables[t]

        best_all = int(table.argmax())
        record("max_all", best_all, table[best_all])

        best_rep = int(reps_sorted[table[reps_sorted].argmax()])
        record("max_selected", best_rep, table[best_rep])

        arm = ucb_select(ucb_state, ucb_params)
        state = int(reps[arm])
        reward = normalize_reward(table[state], stats)
        ucb_state = ucb_update(ucb_state, arm, reward)
        record("ucb", state, table[state])

        arm, _, ts_state = ts_step(
            ts_state,
            ts_params,
            lambda a: normalize_reward(table[reps[a]], stats),
            ts_rng,
        )
        record("ts", int(reps[arm]), table[reps[arm]])

        rand_state = random_assignment(n_t, n_p, random_rng).state_index
        record("random", rand_state, table[rand_state])

    methods = {
        m: MethodTrace(
            state=np.asarray(out[m]["state"], dtype=np.int64),
            se=np.asarray(out[m]["se"]),
            reward=np.asarray(out[m]["reward"]),
        )
        for m in DYNAMIC_METHODS
    }
    return RunRecord(
        kind="dynamic",
        seed=seed,
        config_hash=config.config_hash(),
        methods=methods,
        extra={
            "horizon": horizon,
            "n_states": num_states(n_t, n_p),
            "n_arms": model.n_arms,
            "representatives": list(model.representatives),
            "reward_stats": [stats[0], stats[1]],
        },
    )


def run_dynamic(config: ExperimentConfig, seed: int | None = None, out_dir=None) -> RunRecord:
    """One dynamic trajectory experiment; optionally persists trace,
    summary and the offline cluster model under ``out_dir``."""
    seed = config.seed if seed is None else seed
    model = build_offline_model(config, seed)
    tables = se_tables_for_run(config, seed)
    record = _dynamic_record(config, seed, model, tables)
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        write_trace_csv(os.path.join(out_dir, "trace.csv"), record, "step")
        write_summary_json(os.path.join(out_dir, "summary.json"), record.summary_dict())
        model.save(os.path.join(out_dir, "cluster_model.json"))
    return record


def run_static(config: ExperimentConfig, seed: int | None = None, out_dir=None) -> RunRecord:
    """Static benchmark: independent user placements, exhaustive vs random."""
    seed = config.seed if seed is None else seed
    geometry = config.geometry()
    params = config.link_params()
    f_rf = default_rf_selector(config.n_tx, config.n_rf)
    placement_rng = _rng(seed, _TAG_USERS)
    random_rng = _rng(seed, _TAG_RANDOM)

    out = {m: {"state": [], "se": []} for m in STATIC_METHODS}
    for i in range(config.n_samples):
        users = config.fixed_user_positions(config.k_users, placement_rng)
        channels = generate_channels(geometry, None, users, _seq(seed, _TAG_SAMPLE, i))
        best = exhaustive_search(channels, config.k_users, None, 0, f_rf, params)
        out["exhaustive"]["state"].append(best.assignment.state_index)
        out["exhaustive"]["se"].append(best.se)

        rand = random_assignment(config.n_tx, config.n_modes, random_rng)
        try:
            rand_se = evaluate_assignment(channels, rand, f_rf, params, 0)
        except BdInfeasibleError:
            rand_se = -np.inf
        out["random"]["state"].append(rand.state_index)
        out["random"]["se"].append(rand_se)

    methods = {
        m: MethodTrace(
            state=np.asarray(out[m]["state"], dtype=np.int64),
            se=np.asarray(out[m]["se"]),
        )
        for m in STATIC_METHODS
    }
    record = RunRecord(
        kind="static",
        seed=seed,
        config_hash=config.config_hash(),
        methods=methods,
        extra={"n_samples": config.n_samples, "n_states": num_states(config.n_tx, config.n_modes)},
    )
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        write_trace_csv(os.path.join(out_dir, "trace.csv"), record, "sample")
        write_summary_json(os.path.join(out_dir, "summary.json"), record.summary_dict())
    return record


def run_cluster_sweep(config: ExperimentConfig, k_values=None, out_dir=None):
    """Final cumulative reward per method as the cluster count varies.

    Reuses one SE table and one offline channel realization per seed across
    all k values.  Returns (rows, detail) where rows holds per-k medians
    over seeds and detail the individual runs.
    """
    k_values = list(config.k_values if k_values is None else k_values)
    seeds = config.run_seeds()
    geometry = config.geometry()
    params = config.link_params()
    f_rf = default_rf_selector(config.n_tx, config.n_rf)
    snaps = offline_snapshot_indices(config)

    detail = []
    finals = {m: {k: [] for k in k_values} for m in DYNAMIC_METHODS}
    for seed in seeds:
        tables = se_tables_for_run(config, seed)
        trajectory = config.build_trajectory()
        users = _dynamic_users(config, seed)
        offline_channels = generate_channels(
            geometry, trajectory, users, _seq(seed, _TAG_OFFLINE)
        )
        for k in k_values:
            model = build_cluster_model(
                offline_channels,
                snaps,
                config.pca_components,
                k,
                _seq(seed, _TAG_MODEL),
                f_rf,
                params,
            )
            record = _dynamic_record(config, seed, model, tables)
            row = {"k": int(k), "seed": int(seed)}
            for m in DYNAMIC_METHODS:
                final = float(record.methods[m].cum_reward[-1])
                row[m] = final
                finals[m][k].append(final)
            detail.append(row)

    rows = [
        {"k": int(k), **{m: float(np.median(finals[m][k])) for m in DYNAMIC_METHODS}}
        for k in k_values
    ]
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        header = ["k", "seed"] + list(DYNAMIC_METHODS)
        lines = [",".join(header)]
        for row in detail:
            lines.append(
                ",".join([str(row["k"]), str(row["seed"])] + [_fmt(row[m]) for m in DYNAMIC_METHODS])
            )
        with open(os.path.join(out_dir, "trace.csv"), "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
        write_summary_json(
            os.path.join(out_dir, "summary.json"),
            {
                "kind": "sweep",
                "config_hash": config.config_hash(),
                "version": __version__,
                "seeds": list(seeds),
                "k_values": [int(k) for k in k_values],
                "medians": rows,
            },
        )
    return rows, detail


def export_dataset(config: ExperimentConfig, out_dir, seed: int | None = None):
    """Write a sample-major channel tensor plus exhaustive-search labels.

    Labels are computed on the float32-quantized tensor (exactly what a
    reader gets back), so recomputing them from the file reproduces the
    CSV bit for bit.
    """
    seed = config.seed if seed is None else seed
    geometry = config.geometry()
    params = config.link_params()
    f_rf = default_rf_selector(config.n_tx, config.n_rf)
    placement_rng = _rng(seed, _TAG_USERS)

    sets = []
    for i in range(config.n_samples):
        users = config.fixed_user_positions(config.k_users, placement_rng)
        channels = generate_channels(geometry, None, users, _seq(seed, _TAG_SAMPLE, i))
        sets.append(channels.tensor[:, :, 0])  # (K, N_f, N_P, N_R, N_T)
    tensor = quantize_c64(np.stack(sets))

    rows = []
    for i in range(config.n_samples):
        channels = ChannelSet(tensor[i][:, :, None])
        best = exhaustive_search(channels, config.k_users, None, 0, f_rf, params)
        rows.append((i, best.assignment, best.se))

    os.makedirs(out_dir, exist_ok=True)
    tensor_path = os.path.join(out_dir, "dataset.ract")
    labels_path = os.path.join(out_dir, "labels.csv")
    geometry_meta = config.to_canonical_dict()["geometry"]
    write_channel_tensor(tensor_path, tensor, seed, geometry_meta)

    n_t = config.n_tx
    header = ["sample_id", "state_index"] + [f"mode_{m}" for m in range(n_t)] + ["se"]
    lines = [",".join(header)]
    for i, assignment, se in rows:
        lines.append(
            ",".join(
                [str(i), str(assignment.state_index)]
                + [str(m) for m in assignment.modes]
                + [_fmt(se)]
            )
        )
    with open(labels_path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    write_summary_json(
        os.path.join(out_dir, "summary.json"),
        {
            "kind": "export",
            "config_hash": config.config_hash(),
            "version": __version__,
            "seed": int(seed),
            "n_samples": config.n_samples,
            "tensor": os.path.basename(tensor_path),
            "labels": os.path.basename(labels_path),
        },
    )
    return tensor_path, labels_path
