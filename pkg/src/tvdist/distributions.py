"""Component distributions, the balanced two-component mixture, and exact Bayes rules.

Supports multivariate Gaussians plus four univariate families (Gaussian,
Exponential, Gamma, Beta). Log-densities are exact; out-of-support points
return -inf so density-ratio code degrades gracefully at support edges.

All sampling goes through numpy Generators with explicit seeds; any function
taking ``seed`` accepts either an integer or an existing Generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import linalg
from .errors import BothZero, ConfigError, DimensionMismatch


def rng_from(seed) -> np.random.Generator:
    """int | Generator -> Generator (pass-through for Generators)."""
    return np.random.default_rng(seed)


# ---------------------------------------------------------------------------
# Multivariate Gaussian
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianParams:
    """N(mean, cov) with a cached Cholesky factor and log normalizing constant."""

    mean: np.ndarray
    cov: np.ndarray
    chol: np.ndarray = field(repr=False)
    log_norm_const: float

    @classmethod
    def from_moments(cls, mean, cov) -> "GaussianParams":
        mean = np.asarray(mean, dtype=float)
        cov = np.asarray(cov, dtype=float)
        if mean.ndim != 1 or cov.shape != (mean.size, mean.size):
            raise DimensionMismatch(f"mean {mean.shape} vs cov {cov.shape}")
        lower = linalg.cholesky(cov)
        p = mean.size
        log_norm = -0.5 * p * math.log(2.0 * math.pi) - 0.5 * linalg.log_det(lower)
        return cls(mean=mean, cov=cov, chol=lower, log_norm_const=log_norm)

    @property
    def dim(self) -> int:
        return self.mean.size


def sample_gaussian(g: GaussianParams, n: int, seed) -> np.ndarray:
    """n i.i.d. draws mu + L z with z standard normal; deterministic given seed."""
    rng = rng_from(seed)
    z = rng.standard_normal((n, g.dim))
    return g.mean + z @ g.chol.T


# ---------------------------------------------------------------------------
# Univariate exponential-family members
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Gaussian1D:
    mu: float
    var: float

    def __post_init__(self):
        if self.var <= 0:
            raise ConfigError("Gaussian1D variance must be positive")


@dataclass(frozen=True)
class Exponential:
    rate: float

    def __post_init__(self):
        if self.rate <= 0:
            raise ConfigError("Exponential rate must be positive")


@dataclass(frozen=True)
class Gamma:
    shape: float
    rate: float

    def __post_init__(self):
        if self.shape <= 0 or self.rate <= 0:
            raise ConfigError("Gamma shape and rate must be positive")


@dataclass(frozen=True)
class Beta:
    a: float
    b: float

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ConfigError("Beta parameters must be positive")


Univariate = Union[Gaussian1D, Exponential, Gamma, Beta]
Distribution = Union[GaussianParams, Gaussian1D, Exponential, Gamma, Beta]


def family_kind(dist: Distribution) -> str:
    if isinstance(dist, (GaussianParams, Gaussian1D)):
        return "gaussian"
    if isinstance(dist, Exponential):
        return "exponential"
    if isinstance(dist, Gamma):
        return "gamma"
    if isinstance(dist, Beta):
        return "beta"
    raise ConfigError(f"unknown distribution {dist!r}")


def dim(dist: Distribution) -> int:
    return dist.dim if isinstance(dist, GaussianParams) else 1


def log_density(dist: Distribution, x) -> np.ndarray | float:
    """Exact log-density; -inf outside the support.

    For GaussianParams, x may be a single vector or an (n, p) matrix; for the
    univariate families, a scalar or a 1-D array. Output shape follows input.
    """
    if isinstance(dist, GaussianParams):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        q = linalg.mahalanobis_sq_rows(x, dist.mean, dist.chol)
        out = dist.log_norm_const - 0.5 * q
        return float(out[0]) if single else out

    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.full(x.shape, -np.inf)
    if isinstance(dist, Gaussian1D):
        out = (
            -0.5 * math.log(2.0 * math.pi * dist.var)
            - 0.5 * (x - dist.mu) ** 2 / dist.var
        )
    elif isinstance(dist, Exponential):
        ok = x > 0
        out[ok] = math.log(dist.rate) - dist.rate * x[ok]
    elif isinstance(dist, Gamma):
        ok = x > 0
        const = dist.shape * math.log(dist.rate) - math.lgamma(dist.shape)
        out[ok] = const + (dist.shape - 1.0) * np.log(x[ok]) - dist.rate * x[ok]
    elif isinstance(dist, Beta):
        ok = (x > 0) & (x < 1)
        const = (
            math.lgamma(dist.a + dist.b) - math.lgamma(dist.a) - math.lgamma(dist.b)
        )
        out[ok] = const + (dist.a - 1.0) * np.log(x[ok]) + (dist.b - 1.0) * np.log1p(
            -x[ok]
        )
    else:
        raise ConfigError(f"unknown distribution {dist!r}")
    return float(out[0]) if scalar else out


def sample(dist: Distribution, n: int, seed) -> np.ndarray:
    """n draws; (n, p) for GaussianParams, (n,) for univariate families."""
    rng = rng_from(seed)
    if isinstance(dist, GaussianParams):
        return sample_gaussian(dist, n, rng)
    if isinstance(dist, Gaussian1D):
        return dist.mu + math.sqrt(dist.var) * rng.standard_normal(n)
    if isinstance(dist, Exponential):
        return rng.exponential(scale=1.0 / dist.rate, size=n)
    if isinstance(dist, Gamma):
        return rng.gamma(dist.shape, scale=1.0 / dist.rate, size=n)
    if isinstance(dist, Beta):
        return rng.beta(dist.a, dist.b, size=n)
    raise ConfigError(f"unknown distribution {dist!r}")


# ---------------------------------------------------------------------------
# Balanced mixture, eta, Bayes rule
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MixturePair:
    """Equal-weight mixture of two distributions on the same support dimension."""

    p_dist: Distribution
    q_dist: Distribution

    def __post_init__(self):
        if dim(self.p_dist) != dim(self.q_dist):
            raise DimensionMismatch(
                f"p has dim {dim(self.p_dist)}, q has dim {dim(self.q_dist)}"
            )

    @property
    def dim(self) -> int:
        return dim(self.p_dist)


def _as_rows(m: MixturePair, x) -> np.ndarray:
    """Normalize query points to the shape log_density expects."""
    x = np.asarray(x, dtype=float)
    if isinstance(m.p_dist, GaussianParams):
        return np.atleast_2d(x)
    return np.atleast_1d(x.squeeze())


def sample_mixture(m: MixturePair, n: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """(rows, labels): each row drawn by fair coin, label 1 from P, 0 from Q."""
    rng = rng_from(seed)
    labels = (rng.random(n) < 0.5).astype(np.int64)
    n1 = int(labels.sum())
    p_rows = sample(m.p_dist, n1, rng)
    q_rows = sample(m.q_dist, n - n1, rng)
    if isinstance(m.p_dist, GaussianParams):
        rows = np.empty((n, m.dim))
    else:
        rows = np.empty(n)
    rows[labels == 1] = p_rows
    rows[labels == 0] = q_rows
    return rows, labels


def log_ratio(m: MixturePair, x) -> np.ndarray:
    """log P(x) - log Q(x), elementwise over query points."""
    pts = _as_rows(m, x)
    lp = np.atleast_1d(log_density(m.p_dist, pts))
    lq = np.atleast_1d(log_density(m.q_dist, pts))
    both_zero = np.isneginf(lp) & np.isneginf(lq)
    if np.any(both_zero):
        raise BothZero("point outside the support of both densities")
    with np.errstate(invalid="ignore"):
        return lp - lq


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def eta(m: MixturePair, x) -> np.ndarray | float:
    """Posterior probability that x came from P: sigmoid(log P - log Q)."""
    lr = log_ratio(m, x)
    out = _sigmoid(np.where(np.isnan(lr), 0.0, lr))
    # +inf / -inf log-ratios saturate to 1 / 0 exactly
    out[np.isposinf(lr)] = 1.0
    out[np.isneginf(lr)] = 0.0
    return float(out[0]) if out.size == 1 and np.asarray(x).ndim <= 1 else out


def bayes_classify(m: MixturePair, x) -> np.ndarray | int:
    """Indicator(log P - log Q > 0); ties at exactly 0 go to class 0."""
    lr = log_ratio(m, x)
    out = (lr > 0).astype(np.int64)
    return int(out[0]) if out.size == 1 and np.asarray(x).ndim <= 1 else out


def gaussian_bayes_statistic(g1: GaussianParams, g2: GaussianParams, x) -> np.ndarray:
    """Explicit Gaussian decision statistic:

    log(det S2/det S1) + (x-mu2)' S2^{-1} (x-mu2) - (x-mu1)' S1^{-1} (x-mu1).

    Equals 2 * (log P - log Q); same sign, used as an independent cross-check.
    """
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    return (
        linalg.log_det(g2.chol)
        - linalg.log_det(g1.chol)
        + linalg.mahalanobis_sq_rows(pts, g2.mean, g2.chol)
        - linalg.mahalanobis_sq_rows(pts, g1.mean, g1.chol)
    )


# ---------------------------------------------------------------------------
# Serialization (CLI `oracle` pair specs)
# ---------------------------------------------------------------------------

def distribution_from_dict(d: dict) -> Distribution:
    try:
        family = d["family"]
        if family == "gaussian":
            return GaussianParams.from_moments(d["mean"], d["cov"])
        if family == "gaussian1d":
            return Gaussian1D(mu=float(d["mu"]), var=float(d["var"]))
        if family == "exponential":
            return Exponential(rate=float(d["rate"]))
        if family == "gamma":
            return Gamma(shape=float(d["shape"]), rate=float(d["rate"]))
        if family == "beta":
            return Beta(a=float(d["a"]), b=float(d["b"]))
    except KeyError as exc:
        raise ConfigError(f"distribution spec missing field {exc}") from exc
    raise ConfigError(f"unknown distribution family {d.get('family')!r}")
