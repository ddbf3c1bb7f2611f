"""Feature transforms defining the linear-in-parameters hypothesis class.

Two kinds of map:

* the quadratic map for Gaussian pairs,
  (1, x_1, ..., x_p, x_1^2, x_1 x_2, ..., x_p^2), d = (p+2)(p+1)/2,
  with cross terms ordered lexicographically by (i, j), i <= j;
* the univariate exponential-family maps, selected by the (unordered) pair of
  family kinds, built from the terms {1, x, x^2, log x, log(1-x)}.

Monomial order is fixed so coefficient indices are stable and serializable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionMismatch, DomainViolation

_FAMILY_ORDER = ("gaussian", "exponential", "gamma", "beta")
_FAMILY_TAG = {
    "gaussian": "gauss",
    "exponential": "exp",
    "gamma": "gamma",
    "beta": "beta",
}
_TAG_FAMILY = {v: k for k, v in _FAMILY_TAG.items()}

# Terms per unordered family pair, keyed in _FAMILY_ORDER order.
_PAIR_TERMS = {
    ("gaussian", "gaussian"): ("1", "x", "x2"),
    ("gaussian", "exponential"): ("1", "x", "x2"),
    ("gaussian", "gamma"): ("1", "x", "x2", "logx"),
    ("gaussian", "beta"): ("1", "x", "x2", "logx", "log1mx"),
    ("exponential", "exponential"): ("1", "x"),
    ("exponential", "gamma"): ("1", "x", "logx"),
    ("exponential", "beta"): ("1", "x", "logx", "log1mx"),
    ("gamma", "gamma"): ("1", "x", "logx"),
    ("gamma", "beta"): ("1", "x", "logx", "log1mx"),
    ("beta", "beta"): ("1", "logx", "log1mx"),
}


def _canonical_pair(fam_a: str, fam_b: str) -> tuple[str, str]:
    for fam in (fam_a, fam_b):
        if fam not in _FAMILY_ORDER:
            raise ConfigError(f"unknown family {fam!r}")
    return tuple(sorted((fam_a, fam_b), key=_FAMILY_ORDER.index))


@dataclass(frozen=True)
class FeatureMapSpec:
    """Declarative choice of feature transform plus its output dimension."""

    kind: str  # "gaussian_quadratic" | "table_pair"
    p: int = 1
    families: tuple[str, str] | None = None

    @classmethod
    def gaussian_quadratic(cls, p: int) -> "FeatureMapSpec":
        if p < 1:
            raise ConfigError("p must be >= 1")
        return cls(kind="gaussian_quadratic", p=p)

    @classmethod
    def for_families(cls, fam_a: str, fam_b: str) -> "FeatureMapSpec":
        return cls(kind="table_pair", p=1, families=_canonical_pair(fam_a, fam_b))

    @property
    def terms(self) -> tuple[str, ...]:
        if self.kind != "table_pair":
            raise ConfigError("terms are defined only for univariate pair maps")
        return _PAIR_TERMS[self.families]

    @property
    def out_dim(self) -> int:
        if self.kind == "gaussian_quadratic":
            return (self.p + 2) * (self.p + 1) // 2
        return len(self.terms)

    # -- text tags used in configs and result files ------------------------

    def tag(self) -> str:
        if self.kind == "gaussian_quadratic":
            return f"gq:p={self.p}"
        a, b = self.families
        return f"t1:{_FAMILY_TAG[a]}-{_FAMILY_TAG[b]}"

    @classmethod
    def from_tag(cls, tag: str) -> "FeatureMapSpec":
        try:
            prefix, rest = tag.split(":", 1)
            if prefix == "gq":
                key, val = rest.split("=")
                if key != "p":
                    raise ValueError(tag)
                return cls.gaussian_quadratic(int(val))
            if prefix == "t1":
                a, b = rest.split("-")
                return cls.for_families(_TAG_FAMILY[a], _TAG_FAMILY[b])
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"bad feature tag {tag!r}") from exc
        raise ConfigError(f"bad feature tag {tag!r}")


def apply(spec: FeatureMapSpec, x) -> np.ndarray:
    """Feature vector of length spec.out_dim for one point."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return apply_dataset(spec, x.reshape(1, -1))[0]


def apply_dataset(spec: FeatureMapSpec, data: np.ndarray) -> np.ndarray:
    """Row-wise features: (n, p) samples -> (n, d) matrix.

    Raises DomainViolation (with the first offending row index) when a log
    term is evaluated outside its domain.
    """
    data = np.asarray(data, dtype=float)
    if data.ndim == 1:
        data = data.reshape(-1, 1)
    n, p = data.shape

    if spec.kind == "gaussian_quadratic":
        if p != spec.p:
            raise DimensionMismatch(f"expected p={spec.p}, got {p}")
        cols = [np.ones(n)]
        cols.extend(data[:, i] for i in range(p))
        for i in range(p):
            for j in range(i, p):
                cols.append(data[:, i] * data[:, j])
        return np.column_stack(cols) if n else np.empty((0, spec.out_dim))

    if p != 1:
        raise DimensionMismatch(f"univariate map applied to p={p} data")
    x = data[:, 0]
    cols = []
    for term in spec.terms:
        if term == "1":
            cols.append(np.ones(n))
        elif term == "x":
            cols.append(x)
        elif term == "x2":
            cols.append(x * x)
        elif term == "logx":
            bad = np.flatnonzero(x <= 0)
            if bad.size:
                raise DomainViolation(f"log(x) undefined at row {bad[0]} (x={x[bad[0]]})")
            cols.append(np.log(x))
        elif term == "log1mx":
            bad = np.flatnonzero(x >= 1)
            if bad.size:
                raise DomainViolation(
                    f"log(1-x) undefined at row {bad[0]} (x={x[bad[0]]})"
                )
            cols.append(np.log1p(-x))
    return np.column_stack(cols) if n else np.empty((0, spec.out_dim))


def standardize_columns(
    feats: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Zero-mean/unit-sd columns, leaving the intercept column untouched.

    Returns (standardized matrix, means, sds); constant columns keep sd = 1 so
    the transform stays invertible.
    """
    means = feats.mean(axis=0)
    sds = feats.std(axis=0, ddof=0)
    means[0] = 0.0
    sds[0] = 1.0
    sds[sds == 0.0] = 1.0
    return (feats - means) / sds, means, sds


def destandardize_beta(beta: np.ndarray, means: np.ndarray, sds: np.ndarray) -> np.ndarray:
    """Map coefficients fit on standardized features back to raw feature space."""
    raw = beta / sds
    raw[0] = beta[0] - float(np.sum(beta[1:] * means[1:] / sds[1:]))
    return raw
