"""Two-way K-Means seeding of the initial bicluster population.

Rows (users) and columns (pages) are clustered independently; every pair
(user cluster, page cluster) becomes one seed bicluster, giving
``k_users * k_pages`` seeds that tile the matrix without overlap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .coherence import Bicluster

__all__ = ["SeedingConfig", "ClusteringResult", "kmeans", "initial_biclusters"]


@dataclass(frozen=True)
class SeedingConfig:
    k_users: int = 12
    k_pages: int = 10
    max_kmeans_iters: int = 100
    restarts: int = 5
    seed: int = 0

    def __post_init__(self):
        for name in ("k_users", "k_pages", "max_kmeans_iters", "restarts"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class ClusteringResult:
    assignments: np.ndarray
    centroids: np.ndarray
    wcss: float
    wcss_history: list[float] = field(default_factory=list)
    restart: int = 0

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    def members(self, cluster: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == cluster)


def _sq_distances(points, centers):
    diff = points[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _farthest_point_centers(points, k, rng):
    chosen = [int(rng.integers(points.shape[0]))]
    nearest = _sq_distances(points, points[chosen])[:, 0]
    while len(chosen) < k:
        nxt = int(np.argmax(nearest))
        chosen.append(nxt)
        nearest = np.minimum(nearest, _sq_distances(points, points[[nxt]])[:, 0])
    return points[chosen].copy()


def _repair_empty(points, labels, centers, k):
    """Move the point farthest from its centroid into each empty cluster."""
    labels = labels.copy()
    centers = centers.copy()
    while True:
        counts = np.bincount(labels, minlength=k)
        empty = np.flatnonzero(counts == 0)
        if empty.size == 0:
            return labels, centers
        target = int(empty[0])
        movable = counts[labels] > 1
        dist = np.einsum("ij,ij->i", points - centers[labels], points - centers[labels])
        dist[~movable] = -1.0
        donor = int(np.argmax(dist))
        labels[donor] = target
        centers[target] = points[donor]


def _lloyd(points, centers, max_iters):
    k = centers.shape[0]
    labels = None
    history = []
    for _ in range(max_iters):
        new_labels = np.argmin(_sq_distances(points, centers), axis=1)
        new_labels, centers = _repair_empty(points, new_labels, centers, k)
        for c in range(k):
            centers[c] = points[new_labels == c].mean(axis=0)
        resid = points - centers[new_labels]
        history.append(float(np.einsum("ij,ij->", resid, resid)))
        if labels is not None and np.array_equal(labels, new_labels):
            break
        labels = new_labels
    return new_labels, centers, history


def kmeans(points, k: int, *, max_iters: int = 100, restarts: int = 5, seed: int = 0,
           stream_key: int = 0) -> ClusteringResult:
    """Lloyd's algorithm with farthest-point initialisation and restarts.

    Each restart starts from a random point drawn from its own stream and
    greedily adds the point farthest from the centres chosen so far.  The
    restart with the lowest within-cluster sum of squares wins; ties go to
    the earliest restart.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ValueError("points must be a 2-D array (one vector per row)")
    if k < 1:
        raise ValueError("k must be positive")
    if k > points.shape[0]:
        raise ValueError(f"k={k} exceeds the number of points ({points.shape[0]})")
    best = None
    for restart in range(restarts):
        rng = _rng.stream(seed, stream_key, restart)
        centers = _farthest_point_centers(points, k, rng)
        labels, centers, history = _lloyd(points, centers, max_iters)
        if best is None or history[-1] < best.wcss:
            best = ClusteringResult(labels, centers, history[-1], history, restart)
    return best


def initial_biclusters(matrix, cfg: SeedingConfig = SeedingConfig()) -> list[Bicluster]:
    """Cross product of user clusters and page clusters, ACV cached where defined."""
    if cfg.k_users > matrix.n:
        raise ValueError(f"k_users={cfg.k_users} exceeds the number of users ({matrix.n})")
    if cfg.k_pages > matrix.m:
        raise ValueError(f"k_pages={cfg.k_pages} exceeds the number of pages ({matrix.m})")
    common = dict(max_iters=cfg.max_kmeans_iters, restarts=cfg.restarts, seed=cfg.seed)
    users = kmeans(matrix.values, cfg.k_users, stream_key=_rng.KMEANS_ROWS, **common)
    pages = kmeans(matrix.values.T, cfg.k_pages, stream_key=_rng.KMEANS_COLS, **common)
    seeds = []
    for u in range(cfg.k_users):
        rows = users.members(u)
        for p in range(cfg.k_pages):
            seeds.append(Bicluster(rows, pages.members(p)).with_acv(matrix))
    return seeds
