"""Spectral two-sample and multi-sample tests for populations of networks."""

from netspectest.matrix import NetworkGroup, sample_mean, scale, trace_cubed
from netspectest.montecarlo import (
    TestConfig,
    TestResult,
    null_calibration,
    run_multisample_test,
    run_two_sample_test,
)

__all__ = [
    "NetworkGroup",
    "TestConfig",
    "TestResult",
    "null_calibration",
    "run_multisample_test",
    "run_two_sample_test",
    "sample_mean",
    "scale",
    "trace_cubed",
]

__version__ = "0.1.0"
