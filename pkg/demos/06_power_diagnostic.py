"""Checking the sufficient power conditions for a given alternative.

The diagnostic classifies every index triple by the sign of
Z[i,k] Z[k,l] Z[l,i] for the standardized expected difference Z and
evaluates the two conditions. Run: python demos/06_power_diagnostic.py
"""

from netspectest import models
from netspectest.teststat import power_condition_check

n, m = 60, 10
P1 = models.sbm_prob_matrix(models.SbmSpec.two_block(n, models.log_shift(m)))
P2 = models.sbm_prob_matrix(models.SbmSpec.two_block(n))

report = power_condition_check(P1, P2, m, m)
print(f"a = {report.a:.4f}, b = {report.b:.4f}")
print(f"condition (i): {report.condition_i}, condition (ii): {report.condition_ii}")

# the reversed alternative flips the sign of Z and hence the condition
report = power_condition_check(P2, P1, m, m)
print(f"reversed: condition (i): {report.condition_i}, condition (ii): {report.condition_ii}")
