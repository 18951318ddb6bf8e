import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from netspectest import models
from netspectest.estimators import LinkProbEstimate, VarianceEstimate
from netspectest.teststat import (
    CubeTrace,
    GammaApproxParams,
    build_z_multisample,
    build_z_oracle_binary,
    build_z_plugin_binary,
    build_z_weighted,
    gamma_scale,
    multisample_statistic,
    power_condition_check,
    sample_B,
    theta,
)
from oracles import multisample_entry, power_conditions_loops, z_entry


def sym(rng, n, low=0.0, high=1.0):
    X = rng.uniform(low, high, size=(n, n))
    X = np.triu(X, 1)
    return X + X.T


# --- diagonal B ---------------------------------------------------------------


def test_b_values():
    rng = np.random.default_rng(0)
    assert sample_B(1, rng).values[0] in (-1.0, 1.0)
    assert np.all(np.abs(sample_B(4, rng).values) == 0.5)


def test_b_mean_zero():
    rng = np.random.default_rng(1)
    n = 16
    vals = np.concatenate([sample_B(n, rng).values for _ in range(100_000 // n)])
    assert abs(vals.mean()) < 0.01 / math.sqrt(n) * 4  # 4 standard errors of the per-draw mean


# --- Z builders -----------------------------------------------------------------


def test_z_identical_means_gives_b():
    rng = np.random.default_rng(2)
    A = sym(rng, 5)
    P = np.full((5, 5), 0.3)
    B = sample_B(5, rng)
    Z = build_z_oracle_binary(A, A, P, P, 3, 3, B)
    np.testing.assert_array_equal(Z, np.diag(B.values))


def test_z_two_node_example():
    A1 = np.array([[0.0, 1.0], [1.0, 0.0]])
    A2 = np.zeros((2, 2))
    P = np.full((2, 2), 0.5)
    Z = build_z_oracle_binary(A1, A2, P, P, 1, 1, None)
    assert Z[0, 1] == 1.0


def test_z_plugin_matches_scalar_oracle():
    rng = np.random.default_rng(3)
    n, m1, m2 = 7, 4, 9
    A1, A2 = sym(rng, n), sym(rng, n)
    P1, P2 = sym(rng, n, 0.1, 0.9), sym(rng, n, 0.1, 0.9)
    e1, e2 = LinkProbEstimate(P1, "avg", 0.0), LinkProbEstimate(P2, "avg", 0.0)
    Z = build_z_plugin_binary(A1, A2, e1, e2, m1, m2, None)
    np.testing.assert_array_equal(Z, build_z_oracle_binary(A1, A2, P1, P2, m1, m2, None))
    for i in range(n):
        for j in range(n):
            if i != j:
                ref = z_entry(A1[i, j], A2[i, j], P1[i, j] * (1 - P1[i, j]), P2[i, j] * (1 - P2[i, j]), m1, m2, n)
                assert abs(Z[i, j] - ref) <= 1e-12


def test_z_weighted_matches_scalar_oracle():
    rng = np.random.default_rng(4)
    n, m1, m2 = 6, 5, 3
    A1, A2 = sym(rng, n), sym(rng, n)
    V1, V2 = sym(rng, n, 0.01, 0.2), sym(rng, n, 0.01, 0.2)
    Z = build_z_weighted(A1, A2, VarianceEstimate(V1, "avg", 1e-6), V2, m1, m2, None)
    for i in range(n):
        for j in range(n):
            if i != j:
                assert abs(Z[i, j] - z_entry(A1[i, j], A2[i, j], V1[i, j], V2[i, j], m1, m2, n)) <= 1e-12
    assert not build_z_weighted(A1, A1, V1, V2, m1, m2, None).any()


def test_z_degenerate_denominator():
    A = np.zeros((3, 3))
    with pytest.raises(ValueError, match="degenerate link probability"):
        build_z_oracle_binary(A, A, A, A, 2, 2, None)
    with pytest.raises(ValueError, match="degenerate variance"):
        build_z_weighted(A, A, A, A, 2, 2, None)


def test_z_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension mismatch"):
        build_z_oracle_binary(np.zeros((3, 3)), np.zeros((2, 2)), np.zeros((3, 3)), np.zeros((3, 3)), 1, 1, None)


def test_multisample_matches_scalar_oracle():
    rng = np.random.default_rng(5)
    n, m_list = 6, [4, 7, 5]
    means = [sym(rng, n) for _ in m_list]
    Abar = sum(m * A for m, A in zip(m_list, means)) / sum(m_list)
    V = [sym(rng, n, 0.05, 0.25) for _ in m_list]
    for s in range(3):
        Z = build_z_multisample(means[s], Abar, V, m_list, s, None)
        for i in range(n):
            for j in range(n):
                if i != j:
                    ref = multisample_entry(means[s][i, j], Abar[i, j], [v[i, j] for v in V], m_list, s, n)
                    assert abs(Z[i, j] - ref) <= 1e-12
    # weighted deviations from the pooled mean cancel
    dev = sum(m * (A - Abar) for m, A in zip(m_list, means))
    np.testing.assert_allclose(dev, 0.0, atol=1e-12)


def test_multisample_identical_groups():
    rng = np.random.default_rng(6)
    A = sym(rng, 4)
    V = [np.full((4, 4), 0.2)] * 3
    assert not build_z_multisample(A, A, V, [3, 3, 3], 1, None).any()


def test_multisample_degenerate():
    A = np.zeros((3, 3))
    with pytest.raises(ValueError, match="degenerate multisample variance"):
        build_z_multisample(A, A, [A, A], [2, 2], 0, None)


# --- the statistic ------------------------------------------------------------------


def test_theta_single_node():
    assert theta(np.array([[1.0]])) == pytest.approx(1 / math.sqrt(15))
    assert theta(np.zeros((4, 4))) == 0.0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 25))
def test_cube_trace_matches_direct(seed, n):
    rng = np.random.default_rng(seed)
    Z0 = sym(rng, n, -1, 1)
    fast = CubeTrace(Z0)
    for _ in range(3):
        B = sample_B(n, rng)
        Z = Z0.copy()
        np.fill_diagonal(Z, B.values)
        assert fast.theta(B.values) == pytest.approx(theta(Z), rel=1e-9, abs=1e-12)


def test_cube_trace_batched():
    rng = np.random.default_rng(7)
    Z0 = sym(rng, 10, -1, 1)
    b = np.stack([sample_B(10, rng).values for _ in range(5)])
    fast = CubeTrace(Z0)
    np.testing.assert_allclose(fast.theta(b), [fast.theta(row) for row in b], rtol=1e-13)


def test_null_entries_have_unit_scale():
    # under the null with known P, n * Var(Z_ij) is one
    rng = np.random.default_rng(8)
    P = models.sbm_prob_matrix(models.SbmSpec.two_block(60))
    off = ~np.eye(60, dtype=bool)
    vals = []
    for _ in range(50):
        g1 = models.sample_binary_group(P, 20, rng)
        g2 = models.sample_binary_group(P, 20, rng)
        vals.append(build_z_oracle_binary(g1.mean, g2.mean, P, P, 20, 20, None)[off])
    assert 60 * np.var(np.concatenate(vals)) == pytest.approx(1.0, rel=0.1)


# --- gamma approximation ------------------------------------------------------------


def test_gamma_scale_independent():
    assert gamma_scale(np.eye(3)) == 2.0
    params = GammaApproxParams(3, gamma_scale(np.eye(3)), np.eye(3))
    assert params.critical_value(0.05) == pytest.approx(stats.chi2.ppf(0.95, 3), abs=1e-8)


def test_gamma_scale_ordered_pairs():
    rho = np.array([[1.0, 0.5], [0.5, 1.0]])
    assert gamma_scale(rho) == pytest.approx(4.0)
    assert gamma_scale(rho, pairs="unordered") == pytest.approx(3.0)


def test_gamma_scale_floor_and_validation():
    rho = np.full((3, 3), -0.9) + 1.9 * np.eye(3)
    assert gamma_scale(rho) == 0.1
    with pytest.raises(ValueError):
        gamma_scale(rho, pairs="all")


def test_multisample_statistic_zero():
    value, params = multisample_statistic([0.0, 0.0, 0.0], np.eye(3))
    assert value == 0.0
    assert value < params.critical_value(0.05)
    with pytest.raises(ValueError):
        multisample_statistic([1.0], np.eye(1))


# --- power diagnostic ----------------------------------------------------------------


def test_power_equal_probabilities():
    P = np.full((5, 5), 0.3)
    r = power_condition_check(P, P, 10, 10)
    assert not r.z.any()
    assert r.a == 1.0 and r.b == 0.0
    assert not r.condition_i and not r.condition_ii


def test_power_dominating_probabilities():
    rng = np.random.default_rng(9)
    P2 = sym(rng, 6, 0.1, 0.4)
    r = power_condition_check(P2 + 0.2, P2, 10, 10)
    assert r.b == 0.0
    assert r.condition_i and not r.condition_ii


def _compare(report, ref):
    # sets, proportions and flags must agree exactly; the extremes are cubes
    # computed two different ways and may differ in the last bit
    np.testing.assert_array_equal(report.set_a, ref["set_a"])
    assert report.a == ref["a"] and report.b == ref["b"]
    for key in ("min_a", "min_b", "max_a", "max_b"):
        assert getattr(report, key) == pytest.approx(ref[key], rel=1e-12)
    assert report.condition_i == ref["condition_i"]
    assert report.condition_ii == ref["condition_ii"]


def test_power_brute_force_block_alternative():
    n, m = 60, 10
    spec = models.SbmSpec.two_block(n)
    P1 = models.sbm_prob_matrix(spec)
    P2 = models.sbm_prob_matrix(models.SbmSpec.two_block(n, models.log_shift(m)))
    report = power_condition_check(P1, P2, m, m, chunk=7, keep_sets=True)
    _compare(report, power_conditions_loops(report.z.tolist()))


def test_power_brute_force_random():
    rng = np.random.default_rng(10)
    for _ in range(3):
        P1, P2 = sym(rng, 60, 0.1, 0.9), sym(rng, 60, 0.1, 0.9)
        report = power_condition_check(P1, P2, 10, 15, keep_sets=True)
        _compare(report, power_conditions_loops(report.z.tolist()))


def test_power_weighted_variances():
    rng = np.random.default_rng(11)
    M1, M2 = sym(rng, 8), sym(rng, 8)
    V = sym(rng, 8, 0.01, 0.1)
    report = power_condition_check(M1, M2, 5, 5, variances=(V, V), keep_sets=True)
    _compare(report, power_conditions_loops(report.z.tolist()))
