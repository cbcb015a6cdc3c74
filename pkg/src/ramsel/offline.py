"""Offline arm reduction: PCA over state features, K-means clustering,
medoid representatives and reward-normalization statistics.

The state space grows exponentially in the antenna count, so the online
policies only ever see one representative per cluster.  Everything here is
deterministic per seed; PCA uses a fixed sign convention and all ties break
toward the smallest index.
"""

import json
from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet, state_feature_vector
from .errors import BdInfeasibleError
from .evaluate import evaluate_assignment
from .modes import ModeAssignment, num_states
from .precoding import LinkParams


def pca_fit(data: np.ndarray, p: int):
    """Top-p principal components of ``data`` (n samples x d features).

    Returns (mean, basis d x p, explained variance per component).  Basis
    columns are orthonormal eigenvectors of the sample covariance sorted by
    descending variance; each column's largest-magnitude entry is made
    positive so the decomposition is reproducible.
    """
    data = np.asarray(data, dtype=float)
    n, d = data.shape
    if n < 2:
        raise ValueError("PCA needs at least 2 samples")
    if not 1 <= p <= min(n, d):
        raise ValueError(f"p={p} out of range [1, {min(n, d)}]")
    mean = data.mean(axis=0)
    centered = data - mean
    cov = centered.T @ centered / (n - 1)
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(vals)[::-1][:p]
    basis = vecs[:, order]
    flip = basis[np.abs(basis).argmax(axis=0), np.arange(p)] < 0
    basis = basis * np.where(flip, -1.0, 1.0)
    variance = np.maximum(vals[order], 0.0)
    return mean, basis, variance


def pca_project(data: np.ndarray, mean: np.ndarray, basis: np.ndarray) -> np.ndarray:
    return (np.asarray(data, dtype=float) - mean) @ basis


def _wcss(points: np.ndarray, centroids: np.ndarray, labels: np.ndarray) -> float:
    return float(((points - centroids[labels]) ** 2).sum())


def _kmeans_pp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: next centroid drawn with probability proportional
    to squared distance from the chosen set."""
    n = points.shape[0]
    centroids = np.empty((k, points.shape[1]))
    centroids[0] = points[rng.integers(n)]
    d2 = ((points - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            centroids[j] = points[rng.choice(n, p=d2 / total)]
        else:
            centroids[j] = points[rng.integers(n)]
        d2 = np.minimum(d2, ((points - centroids[j]) ** 2).sum(axis=1))
    return centroids


def kmeans(points: np.ndarray, k: int, seed, max_iter: int = 100):
    """Lloyd's algorithm from a k-means++ start.

    Returns (centroids k x p, labels, wcss).  Empty clusters are repaired
    by promoting the point farthest from its centroid.  The within-cluster
    sum of squares is asserted non-increasing across iterations.
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if k < 1 or k > n:
        raise ValueError(f"k={k} must be in [1, {n}]")
    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp_init(points, k, rng)
    labels = np.zeros(n, dtype=int)
    prev_wcss = np.inf
    for _ in range(max_iter):
        dists = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = dists.argmin(axis=1)

        for j in range(k):
            if not np.any(new_labels == j):
                point_d = dists[np.arange(n), new_labels]
                far = int(point_d.argmax())
                centroids[j] = points[far]
                new_labels[far] = j
                dists[:, j] = ((points - centroids[j]) ** 2).sum(axis=1)

        wcss = _wcss(points, centroids, new_labels)
        assert wcss <= prev_wcss + 1e-9 * max(1.0, prev_wcss if np.isfinite(prev_wcss) else 1.0)
        if np.array_equal(new_labels, labels) and np.isfinite(prev_wcss):
            labels = new_labels
            break
        labels = new_labels
        prev_wcss = wcss
        for j in range(k):
            members = points[labels == j]
            if len(members):
                centroids[j] = members.mean(axis=0)
    final_wcss = _wcss(points, centroids, labels)
    return centroids, labels, final_wcss


def silhouette(points: np.ndarray, labels: np.ndarray) -> float:
    """Mean silhouette score (b - a) / max(a, b); singletons and degenerate
    zero-distance points score 0."""
    points = np.asarray(points, dtype=float)
    labels = np.asarray(labels, dtype=int)
    unique = np.unique(labels)
    if unique.size < 2:
        raise ValueError("silhouette requires at least 2 clusters")
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    n = points.shape[0]
    scores = np.zeros(n)
    for i in range(n):
        own = labels[i]
        same = labels == own
        n_same = same.sum()
        if n_same <= 1:
            continue
        a = dist[i, same].sum() / (n_same - 1)
        b = min(dist[i, labels == c].mean() for c in unique if c != own)
        denom = max(a, b)
        if denom > 0:
            scores[i] = (b - a) / denom
    return float(scores.mean())


@dataclass(frozen=True)
class ClusterModel:
    """Frozen offline-training product the online policies run against."""

    pca_mean: np.ndarray
    pca_basis: np.ndarray
    centroids: np.ndarray
    representatives: tuple[int, ...]
    reward_stats: tuple[float, float]
    n_antennas: int
    n_modes: int

    def __post_init__(self):
        object.__setattr__(self, "pca_mean", np.asarray(self.pca_mean, dtype=float))
        object.__setattr__(self, "pca_basis", np.asarray(self.pca_basis, dtype=float))
        object.__setattr__(self, "centroids", np.asarray(self.centroids, dtype=float))
        object.__setattr__(self, "representatives", tuple(int(r) for r in self.representatives))
        object.__setattr__(self, "reward_stats", (float(self.reward_stats[0]), float(self.reward_stats[1])))
        gram = self.pca_basis.T @ self.pca_basis
        if not np.allclose(gram, np.eye(self.pca_basis.shape[1]), atol=1e-9):
            raise ValueError("PCA basis columns must be orthonormal")
        if len(set(self.representatives)) != len(self.representatives):
            raise ValueError("representatives must be distinct")
        total = num_states(self.n_antennas, self.n_modes)
        if any(not 0 <= r < total for r in self.representatives):
            raise ValueError("representative state index out of range")
        if not self.reward_stats[0] < self.reward_stats[1]:
            raise ValueError("degenerate reward stats: se_min must be < se_max")

    @property
    def n_arms(self) -> int:
        return len(self.representatives)

    def to_json_dict(self) -> dict:
        return {
            "pca_mean": self.pca_mean.tolist(),
            "pca_basis": self.pca_basis.tolist(),
            "centroids": self.centroids.tolist(),
            "representatives": list(self.representatives),
            "reward_stats": [self.reward_stats[0], self.reward_stats[1]],
            "n_antennas": self.n_antennas,
            "n_modes": self.n_modes,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ClusterModel":
        return cls(
            pca_mean=np.asarray(doc["pca_mean"], dtype=float),
            pca_basis=np.asarray(doc["pca_basis"], dtype=float),
            centroids=np.asarray(doc["centroids"], dtype=float),
            representatives=tuple(doc["representatives"]),
            reward_stats=(doc["reward_stats"][0], doc["reward_stats"][1]),
            n_antennas=int(doc["n_antennas"]),
            n_modes=int(doc["n_modes"]),
        )

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ClusterModel":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


def state_feature_matrix(channels: ChannelSet, snapshot_indices) -> np.ndarray:
    """Feature row per state: (n_states, 2 * K * N_f * N_R * N_T)."""
    total = num_states(channels.n_tx, channels.n_modes)
    return np.vstack(
        [state_feature_vector(channels, s, snapshot_indices) for s in range(total)]
    )


def _medoids(proj: np.ndarray, centroids: np.ndarray, labels: np.ndarray) -> list[int]:
    """Per cluster, the member state closest to the centroid (ties toward
    the smallest state index, which argmin already gives)."""
    reps = []
    for j in range(centroids.shape[0]):
        members = np.nonzero(labels == j)[0]
        d = ((proj[members] - centroids[j]) ** 2).sum(axis=1)
        reps.append(int(members[d.argmin()]))
    return reps


def _reward_stats(channels, representatives, snapshot_indices, f_rf, params):
    """(min, max) SE over representatives x offline snapshots."""
    values = []
    for state in representatives:
        assignment = ModeAssignment.from_state_index(state, channels.n_tx, channels.n_modes)
        for t in snapshot_indices:
            try:
                values.append(evaluate_assignment(channels, assignment, f_rf, params, int(t)))
            except BdInfeasibleError:
                continue
    if not values:
        raise BdInfeasibleError("BD infeasible for dimensions: no representative evaluable")
    return float(min(values)), float(max(values))


def build_cluster_model(
    channels: ChannelSet,
    snapshot_indices,
    p: int,
    k_clusters: int,
    seed,
    f_rf: np.ndarray,
    params: LinkParams,
) -> ClusterModel:
    """Full offline pipeline: features -> PCA(p) -> kmeans(k) -> medoid
    representatives -> reward stats over representatives and snapshots.

    ``p`` and ``k_clusters`` are clamped to what the state space supports,
    so desk-scale configs work unchanged on tiny mode spaces.
    """
    total = num_states(channels.n_tx, channels.n_modes)
    features = state_feature_matrix(channels, snapshot_indices)
    d = features.shape[1]

    if total == 1:
        basis = np.eye(d)[:, : min(p, d)]
        stats = _reward_stats(channels, [0], snapshot_indices, f_rf, params)
        return ClusterModel(
            pca_mean=features[0],
            pca_basis=basis,
            centroids=np.zeros((1, basis.shape[1])),
            representatives=(0,),
            reward_stats=stats,
            n_antennas=channels.n_tx,
            n_modes=channels.n_modes,
        )

    p_eff = min(p, total, d)
    mean, basis, _ = pca_fit(features, p_eff)
    proj = pca_project(features, mean, basis)
    k_eff = min(k_clusters, total)
    centroids, labels, _ = kmeans(proj, k_eff, seed)
    reps = _medoids(proj, centroids, labels)
    stats = _reward_stats(channels, reps, snapshot_indices, f_rf, params)
    return ClusterModel(
        pca_mean=mean,
        pca_basis=basis,
        centroids=centroids,
        representatives=tuple(reps),
        reward_stats=stats,
        n_antennas=channels.n_tx,
        n_modes=channels.n_modes,
    )


def diagnose_cluster_count(channels, snapshot_indices, p, k_range, seed):
    """WCSS and silhouette for each candidate cluster count.

    Returns a list of (k, wcss, silhouette) rows.  Silhouette of an all-
    singleton clustering is 0 by the singleton convention.
    """
    total = num_states(channels.n_tx, channels.n_modes)
    features = state_feature_matrix(channels, snapshot_indices)
    p_eff = min(p, total, features.shape[1])
    mean, basis, _ = pca_fit(features, p_eff)
    proj = pca_project(features, mean, basis)
    rows = []
    for k in k_range:
        if not 2 <= k <= total:
            raise ValueError(f"k={k} out of range [2, {total}]")
        _, labels, wcss = kmeans(proj, k, seed)
        rows.append((int(k), float(wcss), float(silhouette(proj, labels))))
    return rows
