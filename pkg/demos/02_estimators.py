"""Estimating link probabilities and edge variances.

The plug-in test needs P (binary networks) or Sigma (weighted networks).
AVG uses the entrywise sample mean, SBM averages within spectral-clustering
blocks, MNBS smooths each row over a small neighbourhood of similar nodes.
Run: python demos/02_estimators.py
"""

import numpy as np

from netspectest import models
from netspectest.clustering import spectral_cluster
from netspectest.estimators import (
    estimate_avg,
    estimate_mnbs,
    estimate_sbm,
    estimate_var_avg,
    estimate_var_sbm,
)

rng = np.random.default_rng(0)
n = 300
spec = models.SbmSpec.two_block(n)
P = models.sbm_prob_matrix(spec)
off = ~np.eye(n, dtype=bool)

# %% community recovery from the mean adjacency
group = models.sample_binary_group(P, 10, rng)
labels = spectral_cluster(group.mean, 2, rng).labels
hit = np.mean(labels == spec.membership)
print("label agreement:", max(hit, 1 - hit))

# %% mean absolute error of the three link-probability estimates
for name, est in [
    ("AVG", estimate_avg(group)),
    ("SBM", estimate_sbm(group, 2, rng=rng)),
    ("MNBS", estimate_mnbs(group)),
]:
    print(f"{name:5s} mean |P_hat - P| = {np.abs(est.matrix - P)[off].mean():.4f}")

# %% AVG error shrinks like m^(-1/2)
for m in (10, 40, 160):
    g = models.sample_binary_group(P, m, rng)
    print(f"m={m:4d}  median |P_hat - P| = {np.median(np.abs(g.mean - P)[off]):.4f}")

# %% weighted networks: variance of Beta weights, within blocks 0.0145
beta = models.BetaWeightSpec(100)
wg = models.sample_beta_group(beta, 30, rng)
truth = beta.variance_matrix()
woff = ~np.eye(100, dtype=bool)
for name, est in [("AVG", estimate_var_avg(wg)), ("SBM", estimate_var_sbm(wg, 2, rng=rng))]:
    print(f"{name:5s} mean |Sigma_hat - Sigma| = {np.abs(est.matrix - truth)[woff].mean():.5f}")
