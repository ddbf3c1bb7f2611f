"""Estimate TV between non-Gaussian univariate distributions.

The discriminative estimator is exact (up to sampling error) whenever the
log-density ratio of the pair is linear in the chosen feature map. For
exponential-family pairs the right sufficient statistics are known in closed
form, so FeatureMapSpec.for_families picks them automatically. Each estimate
is checked against adaptive quadrature of (1/2) integral |p - q|.
"""

from tvdist import (
    Beta,
    DiseConfig,
    Exponential,
    FeatureMapSpec,
    Gamma,
    Gaussian1D,
    estimate_tv,
    quadrature_tv_1d,
    sample,
)

pairs = [
    ("Exp(1) vs Gamma(3, 1)", Exponential(1.0), Gamma(3.0, 1.0), ("exponential", "gamma")),
    ("Beta(2, 5) vs Beta(5, 2)", Beta(2.0, 5.0), Beta(5.0, 2.0), ("beta", "beta")),
    ("Exp(2) vs Exp(0.5)", Exponential(2.0), Exponential(0.5), ("exponential", "exponential")),
    ("N(0, 1) vs N(0, 4)", Gaussian1D(0.0, 1.0), Gaussian1D(0.0, 4.0), ("gaussian", "gaussian")),
]

n = 10_000
print(f"{'pair':28s} {'features':14s} {'quad TV':>8s} {'estimate':>9s} {'error':>7s}")
for name, p_dist, q_dist, families in pairs:
    spec = FeatureMapSpec.for_families(*families)
    real = sample(p_dist, n, seed=0)
    synth = sample(q_dist, n, seed=1)
    est = estimate_tv(DiseConfig(feature_spec=spec), real, synth, seed=2)
    truth = quadrature_tv_1d(p_dist, q_dist)
    print(f"{name:28s} {spec.tag():14s} {truth:8.4f} {est.tv:9.4f} "
          f"{abs(est.tv - truth):7.4f}")
