"""Rejection-rate curves from the simulation harness.

A small version of the SBM study; pass ``full_scale`` for the full grid
(slow). The same thing is available as ``netspectest simulate``.
Run: python demos/07_simulation_curves.py
"""

from netspectest.simharness import ExperimentSpec, curves_csv, monotonicity_flags, run_experiment

spec = ExperimentSpec("sbm", n_grid=(100, 300), m_grid=(10, 50), replicates=40, estimators=("avg", "sbm"))
points = run_experiment(spec)
print(curves_csv(points))
print("alternative curves that fall with n:", monotonicity_flags(points) or "none")
