"""Estimate the TV distance between two multivariate Gaussian sample sets.

Draws n samples from P = N(0, I) and Q = N(mu2, I) in five dimensions, fits
the discriminative estimator with the quadratic feature map, and compares the
estimate against the exact equal-covariance closed form. The classifier's
held-out misclassification rate R converts to the estimate via tv = 1 - 2R.
"""

import numpy as np

from tvdist import (
    DiseConfig,
    FeatureMapSpec,
    GaussianParams,
    closed_form_tv_equal_cov,
    estimate_tv,
    sample,
)

p = 5
n = 10_000
mu2 = np.full(p, 0.4)

p_dist = GaussianParams.from_moments(np.zeros(p), np.eye(p))
q_dist = GaussianParams.from_moments(mu2, np.eye(p))

real = sample(p_dist, n, seed=0)
synth = sample(q_dist, n, seed=1)

config = DiseConfig(feature_spec=FeatureMapSpec.gaussian_quadratic(p))
est = estimate_tv(config, real, synth, seed=2)
truth = closed_form_tv_equal_cov(p_dist, q_dist)

print(f"true TV (closed form)   : {truth:.4f}")
print(f"discriminative estimate : {est.tv:.4f}")
print(f"held-out risk           : {est.risk:.4f}  (n_eval = {est.n_eval})")
print(f"absolute error          : {abs(est.tv - truth):.4f}")
print(f"fit diagnostics         : lambda = {est.diagnostics['lambda']:.2e}, "
      f"{est.diagnostics['iterations']} iterations, "
      f"converged = {est.diagnostics['converged']}")
