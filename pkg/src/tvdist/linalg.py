"""Dense symmetric linear algebra: Cholesky factors, log-determinants, quadratic forms.

All routines operate on row-major float64 ndarrays. Matrices are symmetrized
before factorization because sample covariances accumulate rounding asymmetry;
asymmetry beyond SYM_TOL is an error, not silently repaired.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DimensionMismatch, NotPositiveDefinite, NotSymmetric

# Desk-scale problems only; the simulations use p <= 50.
MAX_DIM = 64
SYM_TOL = 1e-9


def cholesky(a: np.ndarray) -> np.ndarray:
    """Lower-triangular Cholesky factor L with L @ L.T == a.

    Raises NotSymmetric if max |a_ij - a_ji| > SYM_TOL, NotPositiveDefinite on
    a non-positive pivot. No pivoting or jitter: callers repair explicitly.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise DimensionMismatch(f"dimension {a.shape[0]} exceeds supported max {MAX_DIM}")
    asym = np.max(np.abs(a - a.T)) if a.size else 0.0
    if asym > SYM_TOL:
        raise NotSymmetric(f"matrix asymmetry {asym:.3e} exceeds tolerance {SYM_TOL:.0e}")
    a = 0.5 * (a + a.T)
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc


def log_det(lower: np.ndarray) -> float:
    """log det(A) from the Cholesky factor of A: 2 * sum(log diag(L))."""
    return 2.0 * float(np.sum(np.log(np.diag(lower))))


def mahalanobis_sq(x: np.ndarray, mu: np.ndarray, lower: np.ndarray) -> float:
    """(x - mu)^T A^{-1} (x - mu) via one forward triangular solve."""
    x = np.asarray(x, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if x.shape != mu.shape or x.shape[-1] != lower.shape[0]:
        raise DimensionMismatch(
            f"x {x.shape}, mu {mu.shape}, factor dim {lower.shape[0]}"
        )
    z = solve_triangular(lower, x - mu, lower=True)
    return float(z @ z)


def mahalanobis_sq_rows(xs: np.ndarray, mu: np.ndarray, lower: np.ndarray) -> np.ndarray:
    """Row-wise quadratic forms for an (n, p) sample matrix."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if xs.shape[1] != lower.shape[0]:
        raise DimensionMismatch(f"rows of dim {xs.shape[1]}, factor dim {lower.shape[0]}")
    z = solve_triangular(lower, (xs - mu).T, lower=True)
    return np.einsum("ij,ij->j", z, z)
