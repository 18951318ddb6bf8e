"""Spectral clustering of a mean adjacency matrix: normalized-adjacency embedding plus K-means."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg


class DegenerateClusteringError(RuntimeError):
    pass


@dataclass(frozen=True)
class CommunityAssignment:
    labels: np.ndarray
    K: int

    def __post_init__(self):
        sizes = np.bincount(self.labels, minlength=self.K)
        if len(sizes) != self.K or np.any(sizes == 0):
            raise DegenerateClusteringError("degenerate clustering: empty community")

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.K)

    def one_hot(self) -> np.ndarray:
        H = np.zeros((len(self.labels), self.K))
        H[np.arange(len(self.labels)), self.labels] = 1.0
        return H


def spectral_embedding(Abar: np.ndarray, K: int) -> np.ndarray:
    """Row-normalized top-``K`` eigenvectors of the regularized normalized adjacency.

    Eigenvectors are ranked by eigenvalue magnitude so that heterophilic
    block structure (between-block weights above within-block weights) is
    still captured.
    """
    n = Abar.shape[0]
    degree = Abar.sum(axis=1)
    tau = degree.mean() / n
    inv_sqrt = 1.0 / np.sqrt(degree + tau) if tau > 0 else np.zeros(n)
    L = inv_sqrt[:, None] * Abar * inv_sqrt[None, :]
    vals, vecs = scipy.linalg.eigh(L)
    # stable ordering: largest magnitude first, ties by larger eigenvalue
    order = np.lexsort((-vals, -np.abs(vals)))[:K]
    X = vecs[:, order]
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    return np.divide(X, norms, out=np.zeros_like(X), where=norms > 0)


def _kmeans_pp(X: np.ndarray, K: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((K, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for c in range(1, K):
        total = d2.sum()
        idx = rng.choice(n, p=d2 / total) if total > 0 else rng.integers(n)
        centers[c] = X[idx]
        d2 = np.minimum(d2, np.sum((X - centers[c]) ** 2, axis=1))
    return centers


def _lloyd(X: np.ndarray, centers: np.ndarray, max_iter: int):
    K = centers.shape[0]
    labels = None
    for _ in range(max_iter):
        dist = np.sum((X[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        new = np.argmin(dist, axis=1)  # ties go to the lowest cluster index
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        counts = np.bincount(labels, minlength=K)
        if np.any(counts == 0):
            return None, np.inf
        for c in range(K):
            centers[c] = X[labels == c].mean(axis=0)
    dist = np.sum((X[:, None, :] - centers[None, :, :]) ** 2, axis=2)
    labels = np.argmin(dist, axis=1)
    if np.any(np.bincount(labels, minlength=K) == 0):
        return None, np.inf
    return labels, float(dist[np.arange(len(labels)), labels].sum())


def canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Relabel so communities are numbered by first appearance."""
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(first)
    remap = np.empty(len(order), dtype=np.int64)
    remap[np.unique(labels)[order]] = np.arange(len(order))
    return remap[labels]


def kmeans(
    X: np.ndarray,
    K: int,
    rng: np.random.Generator,
    restarts: int = 10,
    max_iter: int = 100,
    retries: int = 5,
) -> np.ndarray:
    """K-means with K-means++ seeding; best of ``restarts`` runs by squared-Euclidean objective."""
    for _ in range(retries + 1):
        best, best_obj = None, np.inf
        for _ in range(restarts):
            labels, obj = _lloyd(X, _kmeans_pp(X, K, rng), max_iter)
            if labels is not None and obj < best_obj:
                best, best_obj = labels, obj
        if best is not None:
            return canonical_labels(best)
    raise DegenerateClusteringError("degenerate clustering")


def spectral_cluster(
    Abar: np.ndarray,
    K: int,
    rng: Optional[np.random.Generator] = None,
    restarts: int = 10,
    max_iter: int = 100,
    retries: int = 5,
) -> CommunityAssignment:
    Abar = np.asarray(Abar, dtype=np.float64)
    n = Abar.shape[0]
    if not 1 <= K <= n:
        raise ValueError(f"need 1 <= K <= n, got K={K}, n={n}")
    if K == 1:
        return CommunityAssignment(np.zeros(n, dtype=np.int64), 1)
    rng = np.random.default_rng(0) if rng is None else rng
    X = spectral_embedding(Abar, K)
    labels = kmeans(X, K, rng, restarts=restarts, max_iter=max_iter, retries=retries)
    return CommunityAssignment(labels, K)
