import math

import numpy as np
import pytest
from scipy import stats

from tvdist import distributions as ds
from tvdist import oracle
from tvdist.errors import CovariancesDiffer, DimensionMismatch

TV_1SD = 0.6826894921370859  # mean gap 2, unit variance


def test_closed_form_frozen():
    got = oracle.closed_form_tv_equal_cov(ds.Gaussian1D(-1.0, 1.0), ds.Gaussian1D(1.0, 1.0))
    assert math.isclose(got, TV_1SD, rel_tol=1e-14)
    # mean gap sqrt(3): 2 Phi(sqrt(3)/2) - 1
    got = oracle.closed_form_tv_equal_cov(
        ds.Gaussian1D(0.0, 1.0), ds.Gaussian1D(math.sqrt(3.0), 1.0)
    )
    assert math.isclose(got, 2.0 * stats.norm.cdf(math.sqrt(3.0) / 2.0) - 1.0, rel_tol=1e-12)


def test_closed_form_matches_phi_multivariate():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((3, 3))
    cov = a @ a.T + 2 * np.eye(3)
    mu1, mu2 = rng.standard_normal(3), rng.standard_normal(3)
    g1 = ds.GaussianParams.from_moments(mu1, cov)
    g2 = ds.GaussianParams.from_moments(mu2, cov)
    delta = math.sqrt((mu2 - mu1) @ np.linalg.solve(cov, mu2 - mu1))
    ref = 2.0 * stats.norm.cdf(delta / 2.0) - 1.0
    assert math.isclose(oracle.closed_form_tv_equal_cov(g1, g2), ref, rel_tol=1e-10)


def test_closed_form_symmetric_and_zero_at_equality():
    g1 = ds.Gaussian1D(0.3, 2.0)
    g2 = ds.Gaussian1D(-1.2, 2.0)
    assert oracle.closed_form_tv_equal_cov(g1, g2) == pytest.approx(
        oracle.closed_form_tv_equal_cov(g2, g1)
    )
    assert oracle.closed_form_tv_equal_cov(g1, g1) == 0.0


def test_closed_form_rejects_unequal_covariances():
    with pytest.raises(CovariancesDiffer):
        oracle.closed_form_tv_equal_cov(ds.Gaussian1D(0.0, 1.0), ds.Gaussian1D(1.0, 2.0))
    with pytest.raises(DimensionMismatch):
        oracle.closed_form_tv_equal_cov(
            ds.GaussianParams.from_moments([0.0], [[1.0]]),
            ds.GaussianParams.from_moments([0.0, 0.0], np.eye(2)),
        )


def test_quadrature_matches_closed_form():
    got = oracle.quadrature_tv_1d(ds.Gaussian1D(-1.0, 1.0), ds.Gaussian1D(1.0, 1.0))
    assert math.isclose(got, TV_1SD, abs_tol=1e-6)


def test_quadrature_unequal_variance_pair():
    # N(0,1) vs N(0,4): TV has a closed form via the crossing points
    got = oracle.quadrature_tv_1d(ds.Gaussian1D(0.0, 1.0), ds.Gaussian1D(0.0, 4.0))
    # crossing at |x| = c with c^2 = (8/3) ln 2: TV = Phi2(c) - Phi1(c) gap form
    c = math.sqrt(8.0 / 3.0 * math.log(2.0))
    ref = 2.0 * (
        (stats.norm.cdf(c) - stats.norm.cdf(-c))
        - (stats.norm.cdf(c / 2.0) - stats.norm.cdf(-c / 2.0))
    ) / 2.0
    assert math.isclose(got, ref, abs_tol=1e-6)


def test_quadrature_exponential_family_pairs():
    # independent reference by dense trapezoid integration
    for p_dist, q_dist, hi in [
        (ds.Exponential(1.0), ds.Gamma(3.0, 1.0), 40.0),
        (ds.Beta(2.0, 5.0), ds.Beta(5.0, 2.0), 1.0),
        (ds.Exponential(2.0), ds.Exponential(0.5), 60.0),
    ]:
        xs = np.linspace(1e-9, hi - 1e-9, 400_001)
        dens_p = np.exp(ds.log_density(p_dist, xs))
        dens_q = np.exp(ds.log_density(q_dist, xs))
        ref = np.trapezoid(0.5 * np.abs(dens_p - dens_q), xs)
        got = oracle.quadrature_tv_1d(p_dist, q_dist)
        assert math.isclose(got, ref, abs_tol=5e-5)


def test_quadrature_rejects_multivariate():
    g = ds.GaussianParams.from_moments(np.zeros(2), np.eye(2))
    with pytest.raises(DimensionMismatch):
        oracle.quadrature_tv_1d(g, g)


def test_mc_true_tv_matches_closed_form():
    m = ds.MixturePair(ds.Gaussian1D(-1.0, 1.0), ds.Gaussian1D(1.0, 1.0))
    est = oracle.mc_true_tv(m, 400_000, seed=0)
    assert est.method == "mc_true"
    assert abs(est.tv - TV_1SD) < 4 * est.diagnostics["mc_se"] + 1e-3
    assert est.diagnostics["mc_se"] < 2e-3


def test_mc_true_tv_multivariate_equal_cov():
    p = 4
    mu2 = np.full(p, 0.5)
    g1 = ds.GaussianParams.from_moments(np.zeros(p), np.eye(p))
    g2 = ds.GaussianParams.from_moments(mu2, np.eye(p))
    est = oracle.mc_true_tv(ds.MixturePair(g1, g2), 200_000, seed=1)
    ref = oracle.closed_form_tv_equal_cov(g1, g2)
    assert abs(est.tv - ref) < 0.005


def test_mc_true_tv_identical_distributions_zero():
    m = ds.MixturePair(ds.Gamma(2.0, 1.0), ds.Gamma(2.0, 1.0))
    est = oracle.mc_true_tv(m, 10_000, seed=2)
    assert est.tv == 0.0


def test_mc_true_tv_disjoint_support_one():
    # supports barely overlap: TV essentially 1
    m = ds.MixturePair(ds.Gaussian1D(-50.0, 1.0), ds.Gaussian1D(50.0, 1.0))
    est = oracle.mc_true_tv(m, 10_000, seed=3)
    assert est.tv > 0.999999


def test_mc_true_tv_deterministic():
    m = ds.MixturePair(ds.Exponential(1.0), ds.Gamma(3.0, 1.0))
    assert oracle.mc_true_tv(m, 5000, seed=4).tv == oracle.mc_true_tv(m, 5000, seed=4).tv
