"""Generative models for populations of networks.

Covers the stochastic block model, a smooth graphon, the correlated
Erdos-Renyi model and Beta-weighted two-community networks. Community
labels are 0-based throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from netspectest.matrix import NetworkGroup


def stream_rng(seed: int, *stream: int) -> np.random.Generator:
    """Independent generator for ``stream`` derived from a master ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, stream)]))


def third_membership(n: int) -> np.ndarray:
    """First ``floor(n/3)`` nodes in community 0, the rest in community 1."""
    labels = np.ones(n, dtype=np.int64)
    labels[: n // 3] = 0
    return labels


def half_membership(n: int) -> np.ndarray:
    """First ``floor(n/2)`` nodes in community 0, the rest in community 1."""
    labels = np.ones(n, dtype=np.int64)
    labels[: n // 2] = 0
    return labels


def sbm_block(eps: float = 0.0) -> np.ndarray:
    """Two-block link probabilities; ``eps`` shifts the first within-block entry."""
    return np.array([[0.5 + eps, 0.25], [0.25, 0.5]])


def log_shift(m: int, numerator: float = 1.0) -> float:
    """``numerator / (5 log m)`` with the natural log, the perturbation size used in the simulations."""
    return numerator / (5.0 * math.log(m))


@dataclass(frozen=True)
class SbmSpec:
    membership: np.ndarray
    block: np.ndarray

    def __post_init__(self):
        block = np.asarray(self.block, dtype=np.float64)
        if block.ndim != 2 or block.shape[0] != block.shape[1]:
            raise ValueError("block matrix must be square")
        if not np.array_equal(block, block.T):
            raise ValueError("block matrix must be symmetric")
        if np.any(block < 0) or np.any(block > 1):
            raise ValueError("block probabilities must lie in [0, 1]")
        labels = np.asarray(self.membership)
        if labels.size and (labels.min() < 0 or labels.max() >= block.shape[0]):
            raise ValueError("community label out of range")
        object.__setattr__(self, "block", block)
        object.__setattr__(self, "membership", labels.astype(np.int64))

    @property
    def n(self) -> int:
        return len(self.membership)

    @classmethod
    def two_block(cls, n: int, eps: float = 0.0) -> "SbmSpec":
        return cls(third_membership(n), sbm_block(eps))


def sbm_prob_matrix(spec: SbmSpec) -> np.ndarray:
    labels = spec.membership
    return spec.block[np.ix_(labels, labels)]


def f0(v1, v2):
    """Smooth graphon ``(v1^2 + v2^2 + sqrt(v1) + sqrt(v2)) / 4``."""
    v1 = np.asarray(v1, dtype=np.float64)
    v2 = np.asarray(v2, dtype=np.float64)
    return (v1**2 + v2**2 + np.sqrt(v1) + np.sqrt(v2)) / 4.0


GRAPHONS = {"f0": f0}


@dataclass(frozen=True)
class GraphonSpec:
    latent: np.ndarray
    graphon_id: str = "f0"

    def __post_init__(self):
        latent = np.asarray(self.latent, dtype=np.float64)
        if np.any(latent < 0) or np.any(latent > 1):
            raise ValueError("latent positions must lie in [0, 1]")
        if self.graphon_id not in GRAPHONS:
            raise ValueError(f"unknown graphon {self.graphon_id!r}")
        object.__setattr__(self, "latent", latent)

    @property
    def n(self) -> int:
        return len(self.latent)

    @classmethod
    def uniform(cls, n: int, rng: np.random.Generator, graphon_id: str = "f0") -> "GraphonSpec":
        return cls(rng.uniform(0.0, 1.0, size=n), graphon_id)


def graphon_prob_matrix(spec: GraphonSpec) -> np.ndarray:
    f = GRAPHONS[spec.graphon_id]
    eta = spec.latent
    return f(eta[:, None], eta[None, :])


def random_subset(n: int, rng: np.random.Generator, fraction: int = 10) -> np.ndarray:
    """Uniform subset of ``floor(n / fraction)`` nodes drawn without replacement."""
    return np.sort(rng.choice(n, size=n // fraction, replace=False))


def perturb_subset(P: np.ndarray, subset, eps: float) -> np.ndarray:
    """Subtract ``eps`` from entries whose endpoints both lie in ``subset``.

    Mixed pairs (one endpoint inside, one outside) are left unchanged.
    The result is clamped to [0, 1].
    """
    out = np.array(P, dtype=np.float64)
    idx = np.asarray(subset, dtype=np.int64)
    out[np.ix_(idx, idx)] -= eps
    return np.clip(out, 0.0, 1.0)


def _check_probabilities(P: np.ndarray) -> np.ndarray:
    P = np.asarray(P, dtype=np.float64)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ValueError("probability matrix must be square")
    if np.any(P < 0) or np.any(P > 1) or np.any(np.isnan(P)):
        raise ValueError("link probabilities must lie in [0, 1]")
    return P


def sample_binary(P, rng: np.random.Generator) -> np.ndarray:
    """One symmetric 0/1 adjacency matrix with independent upper-triangle edges."""
    P = _check_probabilities(P)
    n = P.shape[0]
    iu = np.triu_indices(n, 1)
    A = np.zeros((n, n))
    A[iu] = rng.random(len(iu[0])) < P[iu]
    return A + A.T


def sample_binary_group(P, m: int, rng: np.random.Generator, keep_matrices: bool = False) -> NetworkGroup:
    """Group of ``m`` independent binary networks drawn from ``P``.

    Unless ``keep_matrices`` is set, only the per-edge counts are drawn (a
    binomial draw per edge), which has the same law as summing ``m``
    Bernoulli adjacency matrices.
    """
    if m < 1:
        raise ValueError("empty sample")
    P = _check_probabilities(P)
    if keep_matrices:
        return NetworkGroup.from_matrices([sample_binary(P, rng) for _ in range(m)])
    n = P.shape[0]
    iu = np.triu_indices(n, 1)
    counts = np.zeros((n, n))
    counts[iu] = rng.binomial(m, P[iu])
    return NetworkGroup.from_counts(counts + counts.T, m)


@dataclass(frozen=True)
class CorrErSpec:
    n: int
    p: float
    eps: float

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0 and 0.0 <= self.eps <= 1.0):
            raise ValueError("p and eps must lie in [0, 1]")


def sample_correlated_er_group(
    spec: CorrErSpec, m: int, rng: np.random.Generator, keep_matrices: bool = False
) -> NetworkGroup:
    """Children of one parent ER(n, p) graph, each keeping parent edges with probability ``eps``."""
    if m < 1:
        raise ValueError("empty sample")
    parent = sample_binary(np.full((spec.n, spec.n), spec.p), rng)
    if keep_matrices:
        kids = [parent * sample_binary(np.full((spec.n, spec.n), spec.eps), rng) for _ in range(m)]
        return NetworkGroup.from_matrices(kids)
    iu = np.triu_indices(spec.n, 1)
    counts = np.zeros((spec.n, spec.n))
    counts[iu] = rng.binomial(m, spec.eps * parent[iu])
    return NetworkGroup.from_counts(counts + counts.T, m)


@dataclass(frozen=True)
class BetaWeightSpec:
    """Two-community network with Beta-distributed edge weights.

    Within-community weights follow ``Beta(x1 + shift, x2 + shift)`` and
    between-community weights ``Beta(y1 + shift, y2 + shift)``. Weights are
    multiplied by ``scale`` afterwards (``1/4`` gives the sparse setting).
    """

    n: int
    within_params: Tuple[float, float] = (2.0, 8.0)
    between_params: Tuple[float, float] = (4.0, 1.0)
    shift: float = 0.0
    scale: float = 1.0
    membership: Optional[np.ndarray] = None

    def __post_init__(self):
        params = [*self.within_params, *self.between_params]
        if min(params) + self.shift <= 0:
            raise ValueError("Beta parameters must be positive after the shift")
        labels = half_membership(self.n) if self.membership is None else np.asarray(self.membership)
        if len(labels) != self.n:
            raise ValueError("membership length must equal n")
        object.__setattr__(self, "membership", labels.astype(np.int64))

    def shape_matrices(self) -> Tuple[np.ndarray, np.ndarray]:
        same = self.membership[:, None] == self.membership[None, :]
        a = np.where(same, self.within_params[0], self.between_params[0]) + self.shift
        b = np.where(same, self.within_params[1], self.between_params[1]) + self.shift
        return a, b

    def mean_matrix(self) -> np.ndarray:
        a, b = self.shape_matrices()
        M = self.scale * a / (a + b)
        np.fill_diagonal(M, 0.0)
        return M

    def variance_matrix(self) -> np.ndarray:
        a, b = self.shape_matrices()
        V = self.scale**2 * a * b / ((a + b) ** 2 * (a + b + 1.0))
        np.fill_diagonal(V, 0.0)
        return V


def sample_beta_group(spec: BetaWeightSpec, m: int, rng: np.random.Generator) -> NetworkGroup:
    if m < 1:
        raise ValueError("empty sample")
    a, b = spec.shape_matrices()
    iu = np.triu_indices(spec.n, 1)
    a_u, b_u = a[iu], b[iu]
    x = rng.standard_gamma(a_u, size=(m, len(a_u)))
    y = rng.standard_gamma(b_u, size=(m, len(b_u)))
    w = spec.scale * x / (x + y)
    stack = np.zeros((m, spec.n, spec.n))
    stack[:, iu[0], iu[1]] = w
    stack += stack.transpose(0, 2, 1)
    return NetworkGroup.from_matrices(stack, weighted=True)

