"""Normalized difference matrices and the trace-of-cube statistic.

The statistic is ``Tr(Z^3) / sqrt(15)`` where ``Z`` holds standardized
differences of mean adjacency matrices off the diagonal and an independent
random sign diagonal ``B`` with entries ``+-1/sqrt(n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from netspectest.estimators import LinkProbEstimate, VarianceEstimate
from netspectest.matrix import trace_cubed
from netspectest.special import gamma_ppf

SQRT15 = math.sqrt(15.0)
U_MIN = 0.1


@dataclass(frozen=True)
class DiagonalB:
    signs: np.ndarray

    @property
    def n(self) -> int:
        return len(self.signs)

    @property
    def values(self) -> np.ndarray:
        return self.signs / math.sqrt(self.n)


def sample_B(n: int, rng: np.random.Generator) -> DiagonalB:
    """Independent fair signs scaled by ``1/sqrt(n)``."""
    return DiagonalB(rng.integers(0, 2, size=n) * 2.0 - 1.0)


def variance_matrix(est) -> np.ndarray:
    """Per-edge variance implied by an estimate (Bernoulli for link probabilities)."""
    if isinstance(est, LinkProbEstimate):
        return est.bernoulli_variance()
    if isinstance(est, VarianceEstimate):
        return est.matrix
    return np.asarray(est, dtype=np.float64)


def _normalized(diff: np.ndarray, var: np.ndarray, B: Optional[DiagonalB], what: str) -> np.ndarray:
    n = diff.shape[0]
    off = ~np.eye(n, dtype=bool)
    if np.any(var[off] <= 0) or np.any(np.isnan(var[off])):
        raise ValueError(f"degenerate {what}")
    Z = np.zeros((n, n))
    Z[off] = diff[off] / np.sqrt(n * var[off])
    if B is not None:
        if B.n != n:
            raise ValueError("dimension mismatch between B and the data")
        np.fill_diagonal(Z, B.values)
    return Z


def _check_shapes(*mats):
    shapes = {np.shape(M) for M in mats}
    if len(shapes) != 1:
        raise ValueError(f"dimension mismatch: {sorted(shapes)}")


def build_z_oracle_binary(A1, A2, P1, P2, m1: int, m2: int, B: Optional[DiagonalB]) -> np.ndarray:
    """Normalized matrix with the true link probabilities in the denominator.

    ``B=None`` leaves a zero diagonal.
    """
    A1, A2, P1, P2 = (np.asarray(x, dtype=np.float64) for x in (A1, A2, P1, P2))
    _check_shapes(A1, A2, P1, P2)
    var = P1 * (1.0 - P1) / m1 + P2 * (1.0 - P2) / m2
    return _normalized(A1 - A2, var, B, "link probability")


def build_z_plugin_binary(
    A1, A2, est1: LinkProbEstimate, est2: LinkProbEstimate, m1: int, m2: int, B: Optional[DiagonalB]
) -> np.ndarray:
    return build_z_oracle_binary(A1, A2, est1.matrix, est2.matrix, m1, m2, B)


def build_z_weighted(A1, A2, var1, var2, m1: int, m2: int, B: Optional[DiagonalB]) -> np.ndarray:
    """Normalized matrix with per-edge variances (estimates or arrays) in the denominator."""
    A1, A2 = np.asarray(A1, dtype=np.float64), np.asarray(A2, dtype=np.float64)
    V1, V2 = variance_matrix(var1), variance_matrix(var2)
    _check_shapes(A1, A2, V1, V2)
    return _normalized(A1 - A2, V1 / m1 + V2 / m2, B, "variance")


def build_z_multisample(
    Abar_s, Abar, variances: Sequence, m_list: Sequence[int], s: int, B: Optional[DiagonalB]
) -> np.ndarray:
    """Normalized deviation of group ``s`` from the pooled mean ``Abar``.

    ``variances`` holds one estimate per group (link probability estimates
    contribute their Bernoulli variance).
    """
    V = [variance_matrix(v) for v in variances]
    m = float(sum(m_list))
    pooled = sum(ms * v for ms, v in zip(m_list, V)) / m**2
    bracket = (1.0 / m_list[s] - 2.0 / m) * V[s] + pooled
    Abar_s, Abar = np.asarray(Abar_s, dtype=np.float64), np.asarray(Abar, dtype=np.float64)
    _check_shapes(Abar_s, Abar, bracket)
    return _normalized(Abar_s - Abar, bracket, B, "multisample variance")


def theta(Z) -> float:
    return trace_cubed(Z) / SQRT15


class CubeTrace:
    """Statistic for many diagonals ``B`` sharing one off-diagonal part.

    With ``Z = Z0 + diag(b)`` and ``Z0`` zero on the diagonal,
    ``Tr(Z^3) = Tr(Z0^3) + 3 sum_i b_i sum_k Z0[i, k]^2 + sum_i b_i^3``,
    so each new ``B`` costs O(n) after one O(n^3) setup.
    """

    def __init__(self, Z0: np.ndarray):
        Z0 = np.array(Z0, dtype=np.float64)
        np.fill_diagonal(Z0, 0.0)
        self.n = Z0.shape[0]
        self.base = trace_cubed(Z0)
        self.row_sq = np.sum(Z0**2, axis=1)

    def theta(self, b: np.ndarray) -> np.ndarray:
        """``b`` is one diagonal (shape ``(n,)``) or a stack of them (``(Q, n)``)."""
        b = np.asarray(b, dtype=np.float64)
        return (self.base + 3.0 * (b @ self.row_sq) + np.sum(b**3, axis=-1)) / SQRT15


@dataclass(frozen=True)
class GammaApproxParams:
    S: int
    u: float
    rho: np.ndarray

    @property
    def shape(self) -> float:
        return self.S / self.u

    def critical_value(self, alpha: float) -> float:
        return gamma_ppf(1.0 - alpha, self.shape, self.u)


def gamma_scale(rho: np.ndarray, pairs: str = "ordered", u_min: float = U_MIN) -> float:
    """Scale ``u = 2 (1 + 2 sum_{q != r} rho_qr / S)`` of the gamma approximation.

    ``pairs="ordered"`` sums over ordered pairs (each unordered pair twice);
    ``"unordered"`` sums each pair once.
    """
    rho = np.asarray(rho, dtype=np.float64)
    S = rho.shape[0]
    off = rho.sum() - np.trace(rho)
    if pairs == "unordered":
        off /= 2.0
    elif pairs != "ordered":
        raise ValueError(f"pairs must be 'ordered' or 'unordered', got {pairs!r}")
    return max(2.0 * (1.0 + 2.0 * off / S), u_min)


def multisample_statistic(
    thetas: Sequence[float], rho, pairs: str = "ordered", u_min: float = U_MIN
) -> Tuple[float, GammaApproxParams]:
    """Sum of squared per-group statistics and its gamma reference law."""
    thetas = np.asarray(thetas, dtype=np.float64)
    S = len(thetas)
    if S < 2:
        raise ValueError("need at least two groups")
    rho = np.asarray(rho, dtype=np.float64)
    if rho.shape != (S, S):
        raise ValueError("rho must be S x S")
    params = GammaApproxParams(S, gamma_scale(rho, pairs, u_min), rho)
    return float(np.sum(thetas**2)), params


@dataclass(frozen=True)
class PowerConditionReport:
    a: float
    b: float
    min_a: float
    min_b: float
    max_a: float
    max_b: float
    condition_i: bool
    condition_ii: bool
    z: np.ndarray
    set_a: Optional[np.ndarray] = None


def signal_matrix(P1, P2, m1: int, m2: int, variances=None) -> np.ndarray:
    """Standardized expected difference with a zero diagonal.

    Binary case (``variances=None``): the Bernoulli variance of the pooled
    ``(m1 P1 + m2 P2) / (m1 + m2)`` is used for both groups. Weighted case:
    ``variances=(Sigma1, Sigma2)`` and ``P1``, ``P2`` are the mean weights.
    """
    P1, P2 = np.asarray(P1, dtype=np.float64), np.asarray(P2, dtype=np.float64)
    if variances is None:
        P = (m1 * P1 + m2 * P2) / (m1 + m2)
        var = P * (1.0 - P) * (1.0 / m1 + 1.0 / m2)
    else:
        var = variance_matrix(variances[0]) / m1 + variance_matrix(variances[1]) / m2
    return _normalized(P1 - P2, var, None, "power diagnostic denominator")


def power_condition_check(
    P1, P2, m1: int, m2: int, variances=None, chunk: int = 64, keep_sets: bool = False
) -> PowerConditionReport:
    """Evaluate the two sufficient power conditions over all ``n^3`` index triples.

    A triple ``(i, k, l)`` falls in set a when ``Z[i,k] Z[k,l] Z[l,i] >= 0``
    and in set b otherwise. The min/max in each condition range over the
    cubed entries at the triple's off-diagonal positions; positions with
    repeated indices (the zero diagonal) are skipped. An empty set
    contributes zero. ``keep_sets=True`` also returns the ``(n, n, n)``
    membership mask of set a (memory grows as ``n^3``).
    """
    Z = signal_matrix(P1, P2, m1, m2, variances)
    n = Z.shape[0]
    C = Z**3
    diag = np.eye(n, dtype=bool)
    C_lo = np.where(diag, np.inf, C)
    C_hi = np.where(diag, -np.inf, C)

    count_a = 0
    min_a = min_b = np.inf
    max_a = max_b = -np.inf
    set_a = np.zeros((n, n, n), dtype=bool) if keep_sets else None
    for start in range(0, n, chunk):
        sl = slice(start, min(start + chunk, n))
        # T[i, k, l] = Z[i, k] Z[k, l] Z[l, i]
        T = Z[sl, :, None] * Z[None, :, :] * Z.T[sl, None, :]
        lo = np.minimum(np.minimum(C_lo[sl, :, None], C_lo[None, :, :]), C_lo.T[sl, None, :])
        hi = np.maximum(np.maximum(C_hi[sl, :, None], C_hi[None, :, :]), C_hi.T[sl, None, :])
        in_a = T >= 0
        if keep_sets:
            set_a[sl] = in_a
        count_a += int(in_a.sum())
        if in_a.any():
            min_a = min(min_a, lo[in_a].min())
            max_a = max(max_a, hi[in_a].max())
        if (~in_a).any():
            min_b = min(min_b, lo[~in_a].min())
            max_b = max(max_b, hi[~in_a].max())

    a = count_a / n**3
    b = 1.0 - a

    def term(weight, value):
        return weight * value if np.isfinite(value) else 0.0

    cond_i = term(a, min_a) + term(b, min_b) > 0
    cond_ii = term(a, max_a) + term(b, max_b) < 0
    return PowerConditionReport(
        a=a, b=b,
        min_a=float(min_a), min_b=float(min_b), max_a=float(max_a), max_b=float(max_b),
        condition_i=bool(cond_i), condition_ii=bool(cond_ii), z=Z, set_a=set_a,
    )
