"""Null and alternative group draws for the five simulation designs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from netspectest import models
from netspectest.matrix import NetworkGroup

EXPERIMENTS = ("sbm", "graphon", "corr_er", "beta", "multisample")
HYPOTHESES = {
    "sbm": ("null", "alt"),
    "graphon": ("null", "alt"),
    "corr_er": ("null", "alt"),
    "beta": ("null", "alt"),
    "multisample": ("null", "alt", "alt2"),
}
SPARSITY = 0.25


@dataclass
class Draw:
    """Sampled groups together with the truth that generated them.

    ``means`` are link probability matrices (binary) or mean weight matrices
    (weighted); ``variances`` is set for weighted designs only.
    """

    groups: List[NetworkGroup]
    means: List[np.ndarray]
    variances: Optional[List[np.ndarray]] = None

    @property
    def weighted(self) -> bool:
        return self.variances is not None


def check_design(experiment: str, hypothesis: str):
    if experiment not in HYPOTHESES:
        raise ValueError(f"unknown experiment id {experiment!r}")
    if hypothesis not in HYPOTHESES[experiment]:
        raise ValueError(f"experiment {experiment!r} has no hypothesis {hypothesis!r}")


def draw(
    experiment: str,
    hypothesis: str,
    n: int,
    m: int,
    rng: np.random.Generator,
    sparsity: float = 1.0,
) -> Draw:
    """Draw the groups of one replicate; every group has ``m`` networks.

    ``sparsity`` below one scales the link probabilities (or weights) and,
    for the binary designs, doubles the perturbation size.
    """
    check_design(experiment, hypothesis)
    rho = sparsity
    shift = models.log_shift(m, 2.0 if sparsity < 1.0 else 1.0)

    if experiment in ("sbm", "multisample"):
        if experiment == "sbm":
            eps = [0.0, 0.0 if hypothesis == "null" else shift]
        else:
            eps = {"null": [0.0, 0.0, 0.0], "alt": [0.0, 0.0, shift], "alt2": [0.0, shift, -shift]}[hypothesis]
        Ps = [rho * models.sbm_prob_matrix(models.SbmSpec.two_block(n, e)) for e in eps]
        return Draw([models.sample_binary_group(P, m, rng) for P in Ps], Ps)

    if experiment == "graphon":
        spec = models.GraphonSpec.uniform(n, rng)
        P1 = rho * models.graphon_prob_matrix(spec)
        P2 = P1
        if hypothesis == "alt":
            P2 = models.perturb_subset(P1, models.random_subset(n, rng), shift)
        return Draw([models.sample_binary_group(P, m, rng) for P in (P1, P2)], [P1, P2])

    if experiment == "corr_er":
        specs = [models.CorrErSpec(n, 0.9, 0.8), models.CorrErSpec(n, 0.9 if hypothesis == "null" else 0.83, 0.8)]
        groups = [models.sample_correlated_er_group(s, m, rng) for s in specs]
        return Draw(groups, [np.full((n, n), s.p * s.eps) for s in specs])

    # beta: weights are Beta-distributed, sparse setting scales them by rho
    beta_shift = 0.0 if hypothesis == "null" else models.log_shift(m)
    specs = [models.BetaWeightSpec(n, scale=rho), models.BetaWeightSpec(n, shift=beta_shift, scale=rho)]
    groups = [models.sample_beta_group(s, m, rng) for s in specs]
    return Draw(groups, [s.mean_matrix() for s in specs], [s.variance_matrix() for s in specs])
