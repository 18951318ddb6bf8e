"""Plug-in estimates of link probabilities (binary) and edge variances (weighted)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from netspectest.clustering import CommunityAssignment, spectral_cluster
from netspectest.matrix import NetworkGroup

DEFAULT_SIGMA_MIN = 1e-6


@dataclass(frozen=True)
class LinkProbEstimate:
    matrix: np.ndarray
    method: str
    delta: float
    params: dict = field(default_factory=dict)

    def bernoulli_variance(self) -> np.ndarray:
        return self.matrix * (1.0 - self.matrix)


@dataclass(frozen=True)
class VarianceEstimate:
    matrix: np.ndarray
    method: str
    sigma_min: float
    params: dict = field(default_factory=dict)


def default_delta(m: int, n: int) -> float:
    return 1.0 / (m * n)


def _clamp(P: np.ndarray, delta: float) -> np.ndarray:
    return np.clip(P, delta, 1.0 - delta)


def _require_binary(group: NetworkGroup):
    if group.weighted:
        raise ValueError("link probability estimators need a binary group")


def estimate_avg(group: NetworkGroup, delta: Optional[float] = None) -> LinkProbEstimate:
    _require_binary(group)
    delta = default_delta(group.m, group.n) if delta is None else delta
    return LinkProbEstimate(_clamp(group.mean, delta), "avg", delta)


def block_average(values: np.ndarray, assignment: CommunityAssignment) -> np.ndarray:
    """``(K, K)`` means of ``values`` over each community block, diagonal entries excluded.

    Blocks without any off-diagonal entry (a singleton community against
    itself) get the overall off-diagonal mean.
    """
    H = assignment.one_hot()
    sizes = assignment.sizes.astype(np.float64)
    off = values - np.diag(np.diag(values))
    sums = H.T @ off @ H
    counts = np.outer(sizes, sizes) - np.diag(sizes)
    n = len(assignment.labels)
    fallback = off.sum() / max(n * (n - 1), 1)
    return np.divide(sums, counts, out=np.full_like(sums, fallback), where=counts > 0)


def _expand(block: np.ndarray, labels: np.ndarray) -> np.ndarray:
    return block[np.ix_(labels, labels)]


def estimate_sbm(
    group: NetworkGroup,
    K: int,
    delta: Optional[float] = None,
    rng: Optional[np.random.Generator] = None,
    assignment: Optional[CommunityAssignment] = None,
) -> LinkProbEstimate:
    """Block-constant estimate after spectral clustering of the mean adjacency."""
    _require_binary(group)
    delta = default_delta(group.m, group.n) if delta is None else delta
    if assignment is None:
        assignment = spectral_cluster(group.mean, K, rng)
    P = _expand(block_average(group.mean, assignment), assignment.labels)
    return LinkProbEstimate(_clamp(P, delta), "sbm", delta, {"K": K, "labels": assignment.labels})


def mnbs_bandwidth(n: int, m: int, C: float = 1.0) -> float:
    """Neighborhood quantile level ``C * sqrt(log n / (n m))``, capped at 1."""
    return min(1.0, C * math.sqrt(math.log(n) / (n * m)))


def row_distances(Abar: np.ndarray) -> np.ndarray:
    """``d[i, j] = max_{k != i, j} |(Abar^2)[i, k] - (Abar^2)[j, k]| / n``."""
    n = Abar.shape[0]
    S = Abar @ Abar / n
    d = np.zeros((n, n))
    diag = np.arange(n)
    for i in range(n):
        diff = np.abs(S[i][None, :] - S)
        diff[:, i] = 0.0
        diff[diag, diag] = 0.0
        d[i] = diff.max(axis=1)
    d[diag, diag] = 0.0
    return d


def estimate_mnbs(
    group: NetworkGroup,
    C: float = 1.0,
    delta: Optional[float] = None,
    h: Optional[float] = None,
) -> LinkProbEstimate:
    """Neighborhood smoothing of the mean adjacency with a shrunken neighborhood.

    Node ``i`` averages the rows of the mean adjacency over the nodes whose
    row distance to ``i`` is at most the ``h``-quantile of its distances.
    ``h`` defaults to :func:`mnbs_bandwidth`.
    """
    _require_binary(group)
    Abar = group.mean
    n, m = group.n, group.m
    delta = default_delta(m, n) if delta is None else delta
    h = mnbs_bandwidth(n, m, C) if h is None else h
    d = row_distances(Abar)
    W = np.zeros((n, n))
    for i in range(n):
        others = np.delete(d[i], i)
        q = np.quantile(others, h) if len(others) else 0.0
        nbrs = np.flatnonzero(d[i] <= q)
        nbrs = nbrs[nbrs != i]
        if len(nbrs) == 0:
            nbrs = np.array([i])
        W[i, nbrs] = 1.0 / len(nbrs)
    P_tilde = W @ Abar
    P = _clamp((P_tilde + P_tilde.T) / 2.0, delta)
    return LinkProbEstimate(P, "mnbs", delta, {"C": C, "h": h})


def estimate_var_avg(group: NetworkGroup, sigma_min: float = DEFAULT_SIGMA_MIN) -> VarianceEstimate:
    """Elementwise unbiased sample variance, floored at ``sigma_min``."""
    V = np.maximum(group.sample_variance(), sigma_min)
    return VarianceEstimate(V, "avg", sigma_min)


def estimate_var_sbm(
    group: NetworkGroup,
    K: int,
    sigma_min: float = DEFAULT_SIGMA_MIN,
    rng: Optional[np.random.Generator] = None,
    assignment: Optional[CommunityAssignment] = None,
) -> VarianceEstimate:
    """Pooled sample variance of all (edge, network) observations in each community block."""
    if group.m < 2:
        raise ValueError("need at least two networks")
    if assignment is None:
        assignment = spectral_cluster(group.mean, K, rng)
    H = assignment.one_hot()
    sizes = assignment.sizes.astype(np.float64)
    counts = (np.outer(sizes, sizes) - np.diag(sizes)) * group.m
    mean_off = group.mean - np.diag(np.diag(group.mean))
    sq_off = group.sq_mean - np.diag(np.diag(group.sq_mean))
    total = group.m * (H.T @ mean_off @ H)
    total_sq = group.m * (H.T @ sq_off @ H)
    with np.errstate(divide="ignore", invalid="ignore"):
        pooled = (total_sq - total**2 / counts) / (counts - 1.0)
    pooled = np.where(counts > 1, pooled, 0.0)
    V = np.maximum(_expand(pooled, assignment.labels), sigma_min)
    return VarianceEstimate(V, "sbm", sigma_min, {"K": K, "labels": assignment.labels})
