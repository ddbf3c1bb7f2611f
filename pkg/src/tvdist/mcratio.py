"""Shared Monte Carlo density-ratio routine.

TV(P, Q) = E_{x ~ (P+Q)/2} |Q(x) - P(x)| / (P(x) + Q(x)), and each term equals
|tanh((log Q - log P) / 2)|, which is what gets averaged here; the tanh form
is overflow-free for any finite log-densities and saturates to 1 when exactly
one density vanishes.
"""

from __future__ import annotations

import numpy as np

from .errors import BothZero

DEFAULT_N_MC = 100_000


def ratio_terms(log_p: np.ndarray, log_q: np.ndarray) -> np.ndarray:
    log_p = np.asarray(log_p, dtype=float)
    log_q = np.asarray(log_q, dtype=float)
    both = np.isneginf(log_p) & np.isneginf(log_q)
    if np.any(both):
        raise BothZero("mixture draw where both densities vanish")
    with np.errstate(invalid="ignore", over="ignore"):
        return np.abs(np.tanh(0.5 * (log_q - log_p)))


def mc_ratio_tv(log_p: np.ndarray, log_q: np.ndarray) -> tuple[float, float]:
    """(mean, standard error) of the ratio terms over the supplied draws."""
    terms = ratio_terms(log_p, log_q)
    n = terms.size
    se = float(terms.std(ddof=1) / np.sqrt(n)) if n > 1 else float("nan")
    return float(terms.mean()), se
