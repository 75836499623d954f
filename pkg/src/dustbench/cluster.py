"""K-means clustering of LAB color samples.

Lloyd iterations alternate nearest-center assignment with mean updates
until the relative loss change drops below tol. Seeding is k-means++
from an explicit seed, nearest-center ties break toward the lowest
center index, and an empty cluster is re-seeded to the sample farthest
from its current center, so results are fully deterministic for a fixed
seed. The per-iteration loss (sum of squared distances) is recorded and
is non-increasing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin


@dataclass(frozen=True)
class ClusterResult:
    """Converged clustering with its loss trace.

    collinearity_residual is the RMS perpendicular distance of the
    centers from their total-least-squares line in the (a, b) chroma
    plane (NaN when k < 2).
    """

    k: int
    centers: np.ndarray
    assignments: np.ndarray
    loss: float
    iterations: int
    collinearity_residual: float
    loss_history: np.ndarray = field(repr=False, default=None)


def cluster_linearity(result) -> float:
    """RMS distance of cluster centers from their best-fit chroma line.

    Accepts a ClusterResult or a (k, >=2) array of centers; for LAB
    centers of shape (k, 3) the (a, b) columns are used. The line is the
    total-least-squares fit through the center centroid, so exactly
    collinear centers give 0.
    """
    centers = result.centers if isinstance(result, ClusterResult) else np.asarray(result)
    centers = np.asarray(centers, dtype=np.float64)
    if centers.ndim != 2 or centers.shape[0] < 2:
        raise ValueError("need at least 2 cluster centers")
    chroma = centers[:, 1:3] if centers.shape[1] >= 3 else centers[:, :2]
    centered = chroma - chroma.mean(axis=0)
    # Smallest singular value carries the perpendicular residual energy.
    s = np.linalg.svd(centered, compute_uv=False)
    return float(s[-1] / np.sqrt(chroma.shape[0]))


def _plus_plus_init(samples: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = samples.shape[0]
    centers = np.empty((k, samples.shape[1]))
    centers[0] = samples[rng.integers(n)]
    d2 = np.sum((samples - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            # All remaining mass at distance 0: duplicate points only.
            centers[j] = samples[rng.integers(n)]
            continue
        centers[j] = samples[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((samples - centers[j]) ** 2, axis=1))
    return centers


def _assign(samples: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-center labels and squared distances (ties -> lowest index)."""
    # Direct differences keep exact ties exact, so argmin's first-match
    # rule implements the documented lowest-index tie-break.
    d2 = np.sum((samples[:, None, :] - centers[None, :, :]) ** 2, axis=2)
    labels = np.argmin(d2, axis=1)
    return labels, d2[np.arange(samples.shape[0]), labels]


def kmeans_lab(samples: np.ndarray, k: int = 15, seed: int = 0,
               max_iter: int = 300, tol: float = 1e-6) -> ClusterResult:
    """Cluster (N, 3) LAB samples into k groups.

    Raises ValueError for empty input or k exceeding the number of
    distinct samples.
    """
    samples = np.ascontiguousarray(samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[0] == 0:
        raise ValueError("samples must be a non-empty (N, D) array")
    if k < 1:
        raise ValueError("k must be >= 1")
    n_distinct = np.unique(samples, axis=0).shape[0]
    if k > n_distinct:
        raise ValueError(f"k={k} exceeds the {n_distinct} distinct samples")

    rng = np.random.default_rng(seed)
    centers = _plus_plus_init(samples, k, rng)

    losses: list[float] = []
    labels = None
    for it in range(1, max_iter + 1):
        labels, d2 = _assign(samples, centers)
        loss = float(d2.sum())
        losses.append(loss)
        if len(losses) >= 2:
            prev = losses[-2]
            if prev == 0.0 or (prev - loss) / max(prev, 1e-300) < tol:
                break

        new_centers = centers.copy()
        for j in range(k):
            mask = labels == j
            if mask.any():
                new_centers[j] = samples[mask].mean(axis=0)
        # Re-seed any empty cluster to the sample farthest from its center.
        empty = [j for j in range(k) if not (labels == j).any()]
        if empty:
            order = np.argsort(d2)[::-1]
            for rank, j in enumerate(empty):
                new_centers[j] = samples[order[rank]]
        centers = new_centers

    # Final assignment so labels are consistent with the returned centers.
    labels, d2 = _assign(samples, centers)
    loss = float(d2.sum())
    if not losses or loss < losses[-1]:
        losses.append(loss)

    residual = cluster_linearity(centers) if k >= 2 else float("nan")
    return ClusterResult(
        k=k,
        centers=centers,
        assignments=labels,
        loss=loss,
        iterations=len(losses),
        collinearity_residual=residual,
        loss_history=np.array(losses),
    )


class LabKMeans(BaseEstimator, ClusterMixin):
    """Estimator wrapper around kmeans_lab.

    Parameters mirror the functional form; after fit the instance
    exposes cluster_centers_, labels_, inertia_, n_iter_ and
    loss_history_.
    """

    def __init__(self, n_clusters: int = 15, random_state: int = 0,
                 max_iter: int = 300, tol: float = 1e-6):
        self.n_clusters = n_clusters
        self.random_state = random_state
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y=None):
        result = kmeans_lab(
            X, k=self.n_clusters, seed=self.random_state,
            max_iter=self.max_iter, tol=self.tol,
        )
        self.cluster_centers_ = result.centers
        self.labels_ = result.assignments
        self.inertia_ = result.loss
        self.n_iter_ = result.iterations
        self.loss_history_ = result.loss_history
        self.result_ = result
        return self

    def predict(self, X):
        if not hasattr(self, "cluster_centers_"):
            raise ValueError("LabKMeans instance is not fitted yet")
        labels, _ = _assign(np.asarray(X, dtype=np.float64), self.cluster_centers_)
        return labels
