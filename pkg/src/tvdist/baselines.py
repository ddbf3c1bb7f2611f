"""Competing TV estimators: parametric (PE), kernel density (KDE), and two
k-nearest-neighbor density-ratio estimators (NNRE, EE).

PE and KDE plug fitted densities into the shared Monte Carlo ratio routine;
NNRE and EE work directly from neighbor counts / distances. All estimates are
clamped to [0, 1] with the raw value kept in diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import logsumexp

from . import mcratio
from .distributions import GaussianParams, rng_from, sample_gaussian
from .errors import (
    DimensionMismatch,
    KTooLarge,
    NotPositiveDefinite,
    TooFewSamples,
    ZeroVariance,
)
from .linalg import cholesky
from .result import TvEstimate, clamp_unit

_EVAL_CHUNK = 2048  # keeps KDE distance blocks around 150 MB at n = 1e4


def _as_matrix(arr) -> np.ndarray:
    arr = np.asarray(arr, dtype=float)
    return arr.reshape(-1, 1) if arr.ndim == 1 else arr


def _check_pair(real: np.ndarray, synth: np.ndarray) -> None:
    if real.shape[1] != synth.shape[1]:
        raise DimensionMismatch(f"real p={real.shape[1]}, synth p={synth.shape[1]}")


# ---------------------------------------------------------------------------
# Parameter estimation
# ---------------------------------------------------------------------------

def fit_gaussian_mle(data: np.ndarray) -> tuple[GaussianParams, float]:
    """ML fit (covariance normalized by n); returns (params, jitter applied).

    On a failed factorization, adds eps * I with eps = 1e-8 * trace / p, then
    escalates tenfold for a few attempts (degenerate inputs only).
    """
    data = _as_matrix(data)
    n, p = data.shape
    if n < p + 2:
        raise TooFewSamples(f"need at least p+2={p + 2} rows, got {n}")
    mean = data.mean(axis=0)
    centered = data - mean
    cov = (centered.T @ centered) / n
    eps = 1e-8 * np.trace(cov) / p
    jitter = 0.0
    for _ in range(6):
        try:
            return GaussianParams.from_moments(mean, cov + jitter * np.eye(p)), jitter
        except NotPositiveDefinite:
            jitter = eps if jitter == 0.0 else jitter * 10.0
    raise NotPositiveDefinite("sample covariance could not be repaired with jitter")


def pe_estimate(
    real: np.ndarray,
    synth: np.ndarray,
    n_mc: int = mcratio.DEFAULT_N_MC,
    seed=0,
) -> TvEstimate:
    """TV of the fitted Gaussians, by Monte Carlo over their balanced mixture."""
    real = _as_matrix(real)
    synth = _as_matrix(synth)
    _check_pair(real, synth)
    p_hat, jit_p = fit_gaussian_mle(real)
    q_hat, jit_q = fit_gaussian_mle(synth)

    rng = rng_from(seed)
    from_p = rng.random(n_mc) < 0.5
    n1 = int(from_p.sum())
    draws = np.empty((n_mc, real.shape[1]))
    draws[from_p] = sample_gaussian(p_hat, n1, rng)
    draws[~from_p] = sample_gaussian(q_hat, n_mc - n1, rng)

    from .distributions import log_density

    tv_raw, se = mcratio.mc_ratio_tv(log_density(p_hat, draws), log_density(q_hat, draws))
    return TvEstimate(
        method="pe",
        tv=clamp_unit(tv_raw),
        risk=0.5 * (1.0 - clamp_unit(tv_raw)),
        n_eval=n_mc,
        diagnostics={"raw_tv": tv_raw, "mc_se": se, "jitter_real": jit_p, "jitter_synth": jit_q},
    )


# ---------------------------------------------------------------------------
# Kernel density estimation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KdeModel:
    """Product-Gaussian-kernel KDE with per-dimension bandwidths."""

    points: np.ndarray
    bandwidths: np.ndarray


def silverman_bandwidths(data: np.ndarray) -> np.ndarray:
    """Per-dimension rule of thumb: h_j = sd_j * (4 / ((p + 2) n))^(1 / (p + 4))."""
    data = _as_matrix(data)
    n, p = data.shape
    if n < 2:
        raise TooFewSamples("bandwidth needs at least 2 rows")
    sds = data.std(axis=0, ddof=1)
    if np.any(sds == 0.0):
        raise ZeroVariance(f"degenerate column {int(np.argmin(sds))}")
    return sds * (4.0 / ((p + 2) * n)) ** (1.0 / (p + 4))


def kde_fit(data: np.ndarray) -> KdeModel:
    data = _as_matrix(data)
    return KdeModel(points=data, bandwidths=silverman_bandwidths(data))


def kde_log_density(model: KdeModel, query: np.ndarray) -> np.ndarray:
    """Log-density at query rows, chunked so memory stays bounded."""
    query = _as_matrix(query)
    pts = model.points / model.bandwidths
    n, p = model.points.shape
    log_const = -math.log(n) - 0.5 * p * math.log(2.0 * math.pi) - float(
        np.sum(np.log(model.bandwidths))
    )
    pts_sq = np.einsum("ij,ij->i", pts, pts)
    out = np.empty(query.shape[0])
    for start in range(0, query.shape[0], _EVAL_CHUNK):
        q = query[start : start + _EVAL_CHUNK] / model.bandwidths
        d2 = np.einsum("ij,ij->i", q, q)[:, None] + pts_sq[None, :] - 2.0 * (q @ pts.T)
        np.maximum(d2, 0.0, out=d2)
        out[start : start + _EVAL_CHUNK] = logsumexp(-0.5 * d2, axis=1) + log_const
    return out


def kde_sample(model: KdeModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw = random data point + bandwidth-scaled normal noise."""
    idx = rng.integers(0, model.points.shape[0], size=n)
    noise = rng.standard_normal((n, model.points.shape[1])) * model.bandwidths
    return model.points[idx] + noise


def kde_estimate(
    real: np.ndarray,
    synth: np.ndarray,
    n_mc: int = mcratio.DEFAULT_N_MC,
    seed=0,
) -> TvEstimate:
    """TV between the two KDE models, by Monte Carlo over their mixture."""
    real = _as_matrix(real)
    synth = _as_matrix(synth)
    _check_pair(real, synth)
    p_kde = kde_fit(real)
    q_kde = kde_fit(synth)

    rng = rng_from(seed)
    from_p = rng.random(n_mc) < 0.5
    n1 = int(from_p.sum())
    draws = np.empty((n_mc, real.shape[1]))
    draws[from_p] = kde_sample(p_kde, n1, rng)
    draws[~from_p] = kde_sample(q_kde, n_mc - n1, rng)

    tv_raw, se = mcratio.mc_ratio_tv(
        kde_log_density(p_kde, draws), kde_log_density(q_kde, draws)
    )
    return TvEstimate(
        method="kde",
        tv=clamp_unit(tv_raw),
        risk=0.5 * (1.0 - clamp_unit(tv_raw)),
        n_eval=n_mc,
        diagnostics={
            "raw_tv": tv_raw,
            "mc_se": se,
            "bandwidths_real": p_kde.bandwidths.tolist(),
            "bandwidths_synth": q_kde.bandwidths.tolist(),
        },
    )


# ---------------------------------------------------------------------------
# Nearest-neighbor ratio estimation
# ---------------------------------------------------------------------------

def _resolve_k(k, default: int, limit: int, what: str) -> int:
    kk = default if k in (None, "auto") else int(k)
    if not (1 <= kk < limit):
        raise KTooLarge(f"{what}: k={kk} outside [1, {limit})")
    return kk


def nnre_estimate(real: np.ndarray, synth: np.ndarray, k=None) -> TvEstimate:
    """Neighbor-count ratio estimator.

    For each synthetic point, its k nearest neighbors in the pooled set (self
    excluded) split into N_i real and M_i synthetic; the estimate averages
    0.5 * |eta * N_i / (M_i + 1) - 1| with eta = M / N.
    """
    real = _as_matrix(real)
    synth = _as_matrix(synth)
    _check_pair(real, synth)
    n_real, n_synth = real.shape[0], synth.shape[0]
    kk = _resolve_k(k, max(1, int(math.isqrt(n_synth))), n_real + n_synth, "nnre")

    pooled = np.vstack([real, synth])
    tree = cKDTree(pooled)
    _, idx = tree.query(synth, k=kk + 1)
    idx = np.atleast_2d(idx)
    # keep the k nearest excluding the query itself: drop the self entry when
    # present, otherwise the (k+1)-th neighbor; the self entry is synthetic,
    # so only the latter case can change the real-neighbor count
    self_idx = n_real + np.arange(n_synth)
    has_self = np.any(idx == self_idx[:, None], axis=1)
    n_i = np.sum(idx < n_real, axis=1) - (~has_self & (idx[:, -1] < n_real))
    n_i = n_i.astype(float)
    m_i = kk - n_i
    eta = n_synth / n_real
    terms = 0.5 * np.abs(eta * n_i / (m_i + 1.0) - 1.0)
    tv_raw = float(terms.mean())
    return TvEstimate(
        method="nnre",
        tv=clamp_unit(tv_raw),
        risk=0.5 * (1.0 - clamp_unit(tv_raw)),
        n_eval=n_synth,
        diagnostics={"raw_tv": tv_raw, "k": kk},
    )


def ee_estimate(real: np.ndarray, synth: np.ndarray, k=None, seed=0) -> TvEstimate:
    """k-NN distance-ratio estimator.

    The synthetic set splits into an evaluation half and a reference half; an
    equal-size reference subsample is drawn from the real set. Each evaluation
    point contributes 0.5 * |M2 rho2^p / (M1 rho1^p) - 1| where rho1, rho2 are
    its k-th neighbor distances into the real / synthetic references.
    """
    real = _as_matrix(real)
    synth = _as_matrix(synth)
    _check_pair(real, synth)
    n_synth, p = synth.shape
    if n_synth < 4:
        raise TooFewSamples("ee needs at least 4 synthetic rows")
    # canonical (sorted) order, then a seeded random split: the estimate
    # depends on the seed but not on the row order of the inputs
    synth = synth[np.lexsort(synth.T[::-1])]
    real = real[np.lexsort(real.T[::-1])]
    n_eval = n_synth // 2
    rng = rng_from(seed)
    perm = rng.permutation(n_synth)
    eval_pts, ref_synth = synth[perm[:n_eval]], synth[perm[n_eval:]]
    m2 = ref_synth.shape[0]

    m1 = min(m2, real.shape[0])
    ref_real = real[rng.choice(real.shape[0], size=m1, replace=False)]

    kk = _resolve_k(k, max(1, int(math.isqrt(n_eval))), min(m1, m2) + 1, "ee")
    rho1 = cKDTree(ref_real).query(eval_pts, k=kk)[0]
    rho2 = cKDTree(ref_synth).query(eval_pts, k=kk)[0]
    if kk > 1:
        rho1, rho2 = rho1[:, -1], rho2[:, -1]
    # duplicate points give zero distances; perturb so the ratio stays finite
    rho1 = np.maximum(rho1, 1e-12)
    rho2 = np.maximum(rho2, 1e-12)
    ratio = (m2 * rho2**p) / (m1 * rho1**p)
    terms = 0.5 * np.abs(ratio - 1.0)
    tv_raw = float(terms.mean())
    return TvEstimate(
        method="ee",
        tv=clamp_unit(tv_raw),
        risk=0.5 * (1.0 - clamp_unit(tv_raw)),
        n_eval=n_eval,
        diagnostics={"raw_tv": tv_raw, "k": kk, "m1": m1, "m2": m2},
    )
