"""Monte Carlo testing procedure over random sign diagonals.

Plug-in estimates are computed once per test; only the diagonal ``B``
changes across the ``Q`` iterations. Iteration ``q`` draws its diagonal from
a generator seeded by ``(seed, q)``, so results do not depend on evaluation
order.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from netspectest import estimators, scenarios, teststat
from netspectest.matrix import NetworkGroup, pooled_mean
from netspectest.models import stream_rng
from netspectest.special import gammaincc, norm_cdf, norm_sf, upper_normal_quantile

ESTIMATORS = ("avg", "sbm", "mnbs")
_EST_STREAM = 0
_B_STREAM = 1


@dataclass(frozen=True)
class TestConfig:
    __test__ = False  # keep pytest from collecting this class

    alpha: float = 0.05
    Q: int = 1000
    estimator: str = "sbm"
    K: Optional[int] = None
    C: float = 1.0
    delta: Optional[float] = None
    sigma_min: float = estimators.DEFAULT_SIGMA_MIN
    weighted: bool = False
    seed: int = 0
    pairs: str = "ordered"

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.Q < 1:
            raise ValueError("Q must be at least 1")
        if self.estimator not in ESTIMATORS:
            raise ValueError(f"unknown estimator {self.estimator!r}")
        if self.estimator == "sbm" and self.K is None:
            raise ValueError("the sbm estimator needs the number of communities K")
        if self.weighted and self.estimator == "mnbs":
            raise ValueError("mnbs applies to binary networks only")

    def replace(self, **changes) -> "TestConfig":
        return TestConfig(**{**asdict(self), **changes})


@dataclass
class TestResult:
    __test__ = False

    rejection_rate: float
    theta_samples: List[float]
    mean_theta: float
    approx_p_value: float
    config: dict
    critical_value: float
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def to_dict(self, include_samples: bool = True) -> dict:
        """JSON-ready view; wall-clock time is left out so output is reproducible."""
        out = {
            "rejection_rate": self.rejection_rate,
            "mean_theta": self.mean_theta,
            "approx_p_value": self.approx_p_value,
            "approx_p_value_is_approximate": True,
            "critical_value": self.critical_value,
            "config": self.config,
            **self.details,
        }
        if include_samples:
            out["theta_samples"] = self.theta_samples
        return out


def estimate(group: NetworkGroup, config: TestConfig, rng: np.random.Generator):
    """Plug-in estimate for ``group`` as selected by ``config``."""
    if group.weighted != config.weighted:
        kind = "weighted" if group.weighted else "binary"
        raise ValueError(f"estimator/group-type mismatch: {kind} group with weighted={config.weighted}")
    if config.weighted:
        if config.estimator == "avg":
            return estimators.estimate_var_avg(group, config.sigma_min)
        return estimators.estimate_var_sbm(group, config.K, config.sigma_min, rng)
    if config.estimator == "avg":
        return estimators.estimate_avg(group, config.delta)
    if config.estimator == "sbm":
        return estimators.estimate_sbm(group, config.K, config.delta, rng)
    return estimators.estimate_mnbs(group, config.C, config.delta)


def sample_diagonals(n: int, Q: int, seed: int) -> np.ndarray:
    """``(Q, n)`` stack of sign diagonal values; row ``q`` depends only on ``(seed, q)``."""
    return np.stack([teststat.sample_B(n, stream_rng(seed, _B_STREAM, q)).values for q in range(Q)])


def _check_same_n(groups: Sequence[NetworkGroup]):
    if len({g.n for g in groups}) != 1:
        raise ValueError("dimension mismatch: groups must share the node set")


def _config_echo(config: TestConfig) -> dict:
    return asdict(config)


def run_two_sample_test(group1: NetworkGroup, group2: NetworkGroup, config: TestConfig) -> TestResult:
    """Two-sample test; the rejection rate over ``Q`` sign diagonals is the decision output."""
    start = time.perf_counter()
    _check_same_n([group1, group2])
    est1 = estimate(group1, config, stream_rng(config.seed, _EST_STREAM, 0))
    est2 = estimate(group2, config, stream_rng(config.seed, _EST_STREAM, 1))
    Z0 = teststat.build_z_weighted(group1.mean, group2.mean, est1, est2, group1.m, group2.m, None)
    thetas = teststat.CubeTrace(Z0).theta(sample_diagonals(group1.n, config.Q, config.seed))
    return _normal_result(thetas, config, time.perf_counter() - start)


def _normal_result(thetas: np.ndarray, config: TestConfig, elapsed: float) -> TestResult:
    crit = upper_normal_quantile(config.alpha / 2.0)
    mean = float(np.mean(thetas))
    return TestResult(
        rejection_rate=float(np.mean(np.abs(thetas) > crit)),
        theta_samples=[float(t) for t in thetas],
        mean_theta=mean,
        approx_p_value=min(1.0, 2.0 * norm_sf(abs(mean))),
        config=_config_echo(config),
        critical_value=crit,
        elapsed=elapsed,
    )


def squared_correlation(thetas: np.ndarray) -> np.ndarray:
    """Sample correlation of squared per-group statistics across iterations.

    ``thetas`` has shape ``(S, Q)``. Groups whose squared statistic does not
    vary get zero correlation with the others.
    """
    sq = thetas**2
    S = sq.shape[0]
    centered = sq - sq.mean(axis=1, keepdims=True)
    norms = np.sqrt(np.sum(centered**2, axis=1))
    rho = np.eye(S)
    for q in range(S):
        for r in range(S):
            if q != r and norms[q] > 0 and norms[r] > 0:
                rho[q, r] = float(centered[q] @ centered[r]) / (norms[q] * norms[r])
    return rho


def run_multisample_test(groups: Sequence[NetworkGroup], config: TestConfig) -> TestResult:
    """Test equality of ``S >= 2`` groups with the gamma approximation to the summed squares."""
    start = time.perf_counter()
    S = len(groups)
    if S < 2:
        raise ValueError("need at least two groups")
    if config.Q < 2:
        raise ValueError("correlation estimation needs Q >= 2")
    _check_same_n(groups)
    ests = [estimate(g, config, stream_rng(config.seed, _EST_STREAM, s)) for s, g in enumerate(groups)]
    Abar = pooled_mean(groups)
    m_list = [g.m for g in groups]
    b = sample_diagonals(groups[0].n, config.Q, config.seed)
    thetas = np.stack([
        teststat.CubeTrace(teststat.build_z_multisample(g.mean, Abar, ests, m_list, s, None)).theta(b)
        for s, g in enumerate(groups)
    ])
    rho = squared_correlation(thetas)
    stats = np.sum(thetas**2, axis=0)
    params = teststat.GammaApproxParams(S, teststat.gamma_scale(rho, config.pairs), rho)
    crit = params.critical_value(config.alpha)
    mean = float(np.mean(stats))
    return TestResult(
        rejection_rate=float(np.mean(stats > crit)),
        theta_samples=[float(t) for t in stats],
        mean_theta=mean,
        approx_p_value=gammaincc(params.shape, mean / params.u),
        config=_config_echo(config),
        critical_value=crit,
        details={
            "gamma_scale": params.u,
            "gamma_shape": params.shape,
            "rho": rho.tolist(),
            "group_theta_means": thetas.mean(axis=1).tolist(),
        },
        elapsed=time.perf_counter() - start,
    )


@dataclass
class CalibrationSummary:
    thetas: np.ndarray
    mean: float
    variance: float
    ks_distance: float
    rejection_rate: float


def ks_distance_normal(x) -> float:
    """Kolmogorov-Smirnov distance between the sample ``x`` and N(0, 1)."""
    x = np.sort(np.asarray(x, dtype=np.float64))
    N = len(x)
    F = np.array([norm_cdf(v) for v in x])
    i = np.arange(1, N + 1)
    return float(max(np.max(i / N - F), np.max(F - (i - 1) / N)))


def null_calibration(
    experiment: str,
    n: int,
    m: int,
    replicates: int,
    config: TestConfig,
    oracle: bool = False,
    sparsity: float = 1.0,
) -> CalibrationSummary:
    """Distribution of one statistic per fresh null replicate (one sign diagonal each).

    With ``oracle=True`` the generating link probabilities (or variances)
    replace the plug-in estimates.
    """
    if experiment == "multisample":
        raise ValueError("null calibration covers the two-sample designs")
    thetas = np.empty(replicates)
    for r in range(replicates):
        rng = stream_rng(config.seed, 2, r)
        d = scenarios.draw(experiment, "null", n, m, rng, sparsity)
        g1, g2 = d.groups
        b = teststat.sample_B(n, rng)
        if oracle and d.weighted:
            Z = teststat.build_z_weighted(g1.mean, g2.mean, d.variances[0], d.variances[1], m, m, b)
        elif oracle:
            Z = teststat.build_z_oracle_binary(g1.mean, g2.mean, d.means[0], d.means[1], m, m, b)
        else:
            cfg = config.replace(weighted=d.weighted, seed=int(rng.integers(2**63)))
            e1 = estimate(g1, cfg, stream_rng(cfg.seed, _EST_STREAM, 0))
            e2 = estimate(g2, cfg, stream_rng(cfg.seed, _EST_STREAM, 1))
            Z = teststat.build_z_weighted(g1.mean, g2.mean, e1, e2, m, m, b)
        thetas[r] = teststat.theta(Z)
    crit = upper_normal_quantile(config.alpha / 2.0)
    return CalibrationSummary(
        thetas=thetas,
        mean=float(thetas.mean()),
        variance=float(thetas.var(ddof=1)) if replicates > 1 else 0.0,
        ks_distance=ks_distance_normal(thetas),
        rejection_rate=float(np.mean(np.abs(thetas) > crit)),
    )
