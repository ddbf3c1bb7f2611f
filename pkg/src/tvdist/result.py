"""The common result record returned by every estimator and oracle."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class TvEstimate:
    """A TV estimate with its provenance.

    ``tv`` is always clamped to [0, 1]; the unclamped value and any method
    diagnostics (raw value, bandwidths, k, iteration counts, MC standard
    error, ...) live in ``diagnostics``. For classifier-based methods ``risk``
    is the held-out misclassification rate and tv = clamp(1 - 2 risk, 0, 1);
    for Monte Carlo ratio methods it is the implied Bayes risk (1 - tv)/2.
    """

    method: str
    tv: float
    risk: float
    n_eval: int
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "tv": self.tv,
            "risk": self.risk,
            "n_eval": self.n_eval,
            "diagnostics": self.diagnostics,
        }


def clamp_unit(x: float) -> float:
    return min(1.0, max(0.0, x))
