"""Dense symmetric matrices and network groups.

Matrices are plain ``float64`` numpy arrays of shape ``(n, n)``. A
:class:`NetworkGroup` carries the first two sample moments of a stack of
adjacency matrices, which is everything the estimators and statistics need,
plus the raw stack when it was observed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np


def as_symmetric(M, name: str = "matrix") -> np.ndarray:
    """Return ``M`` as a float64 square symmetric array, raising otherwise."""
    A = np.asarray(M, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    if not np.array_equal(A, A.T):
        raise ValueError(f"{name} is not symmetric")
    return A


def symmetrize_upper(M: np.ndarray) -> np.ndarray:
    """Mirror the strict upper triangle of ``M`` below the diagonal, zero diagonal."""
    U = np.triu(M, 1)
    return U + U.T


def trace_cubed(M) -> float:
    """Tr(M^3) using one matrix product and a row-wise dot for the diagonal."""
    M = np.asarray(M, dtype=np.float64)
    M2 = M @ M
    # diag(M2 @ M)[i] = sum_k M2[i, k] * M[k, i]; M symmetric so M[k, i] = M[i, k]
    return float(np.einsum("ik,ik->", M2, M))


def scale(M, c: float) -> np.ndarray:
    return float(c) * np.asarray(M, dtype=np.float64)


@dataclass(frozen=True)
class NetworkGroup:
    """An ordered sample of ``m`` networks on a shared node set.

    ``mean`` is the elementwise sample mean and ``sq_mean`` the elementwise
    mean of squares. ``matrices`` holds the raw ``(m, n, n)`` stack when the
    group was built from observed networks; simulated binary groups may be
    drawn directly as binomial counts, in which case it is ``None``.
    """

    mean: np.ndarray
    sq_mean: np.ndarray
    m: int
    weighted: bool = False
    matrices: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("empty sample")
        if self.mean.shape != self.sq_mean.shape:
            raise ValueError("mean and sq_mean shapes differ")

    @property
    def n(self) -> int:
        return self.mean.shape[0]

    @classmethod
    def from_matrices(cls, matrices: Iterable, weighted: bool = False) -> "NetworkGroup":
        stack = np.asarray([np.asarray(A, dtype=np.float64) for A in matrices])
        if stack.size == 0 or stack.ndim != 3:
            raise ValueError("empty sample")
        if stack.shape[1] != stack.shape[2]:
            raise ValueError("adjacency matrices must be square")
        if not np.array_equal(stack, stack.transpose(0, 2, 1)):
            raise ValueError("adjacency matrices must be symmetric")
        if not weighted and not np.all((stack == 0) | (stack == 1)):
            raise ValueError("binary group contains entries other than 0 and 1")
        mean = stack.mean(axis=0)
        sq_mean = mean.copy() if not weighted else (stack**2).mean(axis=0)
        return cls(mean=mean, sq_mean=sq_mean, m=stack.shape[0], weighted=weighted, matrices=stack)

    @classmethod
    def from_counts(cls, counts: np.ndarray, m: int) -> "NetworkGroup":
        """Binary group from per-entry edge counts out of ``m`` networks."""
        mean = np.asarray(counts, dtype=np.float64) / m
        return cls(mean=mean, sq_mean=mean, m=m, weighted=False)

    def sample_variance(self) -> np.ndarray:
        """Unbiased elementwise sample variance; needs ``m >= 2``."""
        if self.m < 2:
            raise ValueError("need at least two networks")
        if self.matrices is not None:
            return self.matrices.var(axis=0, ddof=1)
        v = (self.sq_mean - self.mean**2) * (self.m / (self.m - 1))
        return np.maximum(v, 0.0)

    def subset(self, index: Sequence[int]) -> "NetworkGroup":
        """Group made of the networks at ``index``; needs the raw stack."""
        if self.matrices is None:
            raise ValueError("subsetting needs the raw network stack")
        return NetworkGroup.from_matrices(self.matrices[np.asarray(index)], weighted=self.weighted)


def sample_mean(group) -> np.ndarray:
    """Elementwise mean of a group (a :class:`NetworkGroup` or a sequence of matrices)."""
    if isinstance(group, NetworkGroup):
        return group.mean
    mats = list(group)
    if not mats:
        raise ValueError("empty sample")
    return NetworkGroup.from_matrices(mats, weighted=True).mean


def pooled_mean(groups: Sequence[NetworkGroup]) -> np.ndarray:
    """Mean over all networks of all groups, weighting each group by its size."""
    total = sum(g.m for g in groups)
    return sum(g.m * g.mean for g in groups) / total
