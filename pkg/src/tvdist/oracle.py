"""Ground-truth TV: Monte Carlo from true densities, 1-D adaptive quadrature,
and the closed form for equal-covariance Gaussian pairs."""

from __future__ import annotations

import math

import numpy as np
from scipy import stats
from scipy.integrate import quad

from . import mcratio
from .distributions import (
    Beta,
    Exponential,
    Gamma,
    Gaussian1D,
    GaussianParams,
    MixturePair,
    dim,
    log_density,
    rng_from,
    sample_mixture,
)
from .errors import CovariancesDiffer, DimensionMismatch, ToleranceNotMet
from .linalg import mahalanobis_sq
from .result import TvEstimate


def mc_true_tv(m: MixturePair, n_mc: int, seed) -> TvEstimate:
    """Average of |Q - P| / (P + Q) over n_mc draws from the balanced mixture."""
    rng = rng_from(seed)
    draws, _ = sample_mixture(m, n_mc, rng)
    tv, se = mcratio.mc_ratio_tv(
        np.atleast_1d(log_density(m.p_dist, draws)),
        np.atleast_1d(log_density(m.q_dist, draws)),
    )
    return TvEstimate(
        method="mc_true",
        tv=tv,
        risk=0.5 * (1.0 - tv),
        n_eval=n_mc,
        diagnostics={"mc_se": se},
    )


def _support_interval(dist, tail: float = 1e-13) -> tuple[float, float]:
    if isinstance(dist, GaussianParams):
        if dim(dist) != 1:
            raise DimensionMismatch("quadrature oracle is 1-D only")
        sd = math.sqrt(float(dist.cov[0, 0]))
        return float(dist.mean[0]) - 12.0 * sd, float(dist.mean[0]) + 12.0 * sd
    if isinstance(dist, Gaussian1D):
        sd = math.sqrt(dist.var)
        return dist.mu - 12.0 * sd, dist.mu + 12.0 * sd
    if isinstance(dist, Exponential):
        return 0.0, float(stats.expon.ppf(1.0 - tail, scale=1.0 / dist.rate))
    if isinstance(dist, Gamma):
        return 0.0, float(stats.gamma.ppf(1.0 - tail, dist.shape, scale=1.0 / dist.rate))
    if isinstance(dist, Beta):
        return 0.0, 1.0
    raise DimensionMismatch(f"unsupported distribution {dist!r}")


def quadrature_tv_1d(p_dist, q_dist, tol: float = 1e-6) -> float:
    """Adaptive quadrature of 0.5 * |P - Q| over a support-covering interval."""
    lo_p, hi_p = _support_interval(p_dist)
    lo_q, hi_q = _support_interval(q_dist)
    lo, hi = min(lo_p, lo_q), max(hi_p, hi_q)

    def integrand(x: float) -> float:
        lp = log_density(p_dist, x)
        lq = log_density(q_dist, x)
        fp = math.exp(lp) if lp > -math.inf else 0.0
        fq = math.exp(lq) if lq > -math.inf else 0.0
        return 0.5 * abs(fp - fq)

    val, abserr = quad(integrand, lo, hi, epsabs=0.5 * tol, limit=500)
    if abserr > tol:
        raise ToleranceNotMet(f"quadrature error estimate {abserr:.2e} > {tol:.2e}")
    return float(val)


def _as_gaussian(g) -> GaussianParams:
    if isinstance(g, Gaussian1D):
        return GaussianParams.from_moments([g.mu], [[g.var]])
    return g


def closed_form_tv_equal_cov(g1, g2) -> float:
    """2 Phi(delta / 2) - 1 with delta the Mahalanobis distance between means.

    Valid only for Gaussian pairs sharing one covariance matrix.
    """
    g1, g2 = _as_gaussian(g1), _as_gaussian(g2)
    if g1.dim != g2.dim:
        raise DimensionMismatch(f"dims {g1.dim} vs {g2.dim}")
    diff = np.max(np.abs(g1.cov - g2.cov))
    if diff > 1e-12:
        raise CovariancesDiffer(f"max covariance difference {diff:.3e} > 1e-12")
    delta = math.sqrt(mahalanobis_sq(g2.mean, g1.mean, g1.chol))
    return math.erf(delta / (2.0 * math.sqrt(2.0)))
