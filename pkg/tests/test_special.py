import math

import pytest
from scipy import special as sp
from scipy import stats

from netspectest.special import (
    gamma_cdf,
    gamma_ppf,
    gammainc,
    gammaincc,
    norm_cdf,
    norm_ppf,
    upper_normal_quantile,
)


@pytest.mark.parametrize("p", [1e-12, 1e-6, 0.001, 0.01, 0.02425, 0.025, 0.2, 0.5, 0.8, 0.975, 0.99, 1 - 1e-9])
def test_norm_ppf_against_scipy(p):
    assert norm_ppf(p) == pytest.approx(stats.norm.ppf(p), abs=1e-8)


def test_norm_ppf_edges():
    assert norm_ppf(0.0) == -math.inf
    assert norm_ppf(1.0) == math.inf
    with pytest.raises(ValueError):
        norm_ppf(1.5)


def test_upper_quantile_at_five_percent():
    assert upper_normal_quantile(0.025) == pytest.approx(1.959963984540054, abs=1e-12)


def test_norm_cdf_roundtrip():
    for p in (0.001, 0.3, 0.7, 0.999):
        assert norm_cdf(norm_ppf(p)) == pytest.approx(p, rel=1e-12)


@pytest.mark.parametrize("a", [0.05, 0.5, 1.0, 1.5, 3.0, 12.5, 80.0])
@pytest.mark.parametrize("x", [1e-4, 0.3, 1.0, 2.5, 9.0, 40.0, 150.0])
def test_incomplete_gamma_against_scipy(a, x):
    assert gammainc(a, x) == pytest.approx(sp.gammainc(a, x), rel=1e-10, abs=1e-300)
    assert gammaincc(a, x) == pytest.approx(sp.gammaincc(a, x), rel=1e-10, abs=1e-300)


@pytest.mark.parametrize("shape", [0.3, 1.5, 2.0, 7.5, 30.0])
@pytest.mark.parametrize("p", [0.01, 0.5, 0.95, 0.999])
def test_gamma_ppf_against_scipy(shape, p):
    x = gamma_ppf(p, shape, 2.0)
    assert x == pytest.approx(stats.gamma.ppf(p, shape, scale=2.0), rel=1e-10)
    assert gamma_cdf(x, shape, 2.0) == pytest.approx(p, rel=1e-10)


def test_gamma_with_scale_two_is_chi_square():
    # Gamma(S/2, 2) is chi-square with S degrees of freedom
    for S in (2, 3, 5):
        assert gamma_ppf(0.95, S / 2, 2.0) == pytest.approx(stats.chi2.ppf(0.95, S), abs=1e-8)
