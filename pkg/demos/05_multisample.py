"""Testing equality of three groups at once.

Each group is compared with the pooled mean; the sum of the squared
statistics is referred to a gamma law whose scale accounts for the
correlation between groups. Run: python demos/05_multisample.py
"""

import numpy as np

from netspectest import models
from netspectest.montecarlo import TestConfig, run_multisample_test

rng = np.random.default_rng(5)
n, m = 300, 50
shift = models.log_shift(m)
P = [models.sbm_prob_matrix(models.SbmSpec.two_block(n, e)) for e in (0.0, 0.0, shift)]

null_groups = [models.sample_binary_group(P[0], m, rng) for _ in range(3)]
alt_groups = [models.sample_binary_group(p, m, rng) for p in P]

for pairs in ("ordered", "unordered"):
    cfg = TestConfig(Q=500, estimator="sbm", K=2, seed=2, pairs=pairs)
    r0 = run_multisample_test(null_groups, cfg)
    r1 = run_multisample_test(alt_groups, cfg)
    print(f"{pairs:9s} u={r0.details['gamma_scale']:.2f}: null rate {r0.rejection_rate:.3f}, "
          f"one-group-shifted rate {r1.rejection_rate:.3f}")
print("estimated correlations of squared statistics:")
print(np.round(np.array(r0.details["rho"]), 3))
