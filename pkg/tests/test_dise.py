import json
import math

import numpy as np
import pytest

from tvdist import dise
from tvdist import distributions as ds
from tvdist import features as ft
from tvdist.errors import ConfigError, DegenerateLabels, DimensionMismatch


def quad_spec(p=1):
    return ft.FeatureMapSpec.gaussian_quadratic(p)


def labeled_1d_pair(mu, n, seed):
    rng = ds.rng_from(seed)
    real = rng.normal(-mu, 1.0, n)
    synth = rng.normal(mu, 1.0, n)
    return real, synth


# ---------------------------------------------------------------------------
# objective / gradient
# ---------------------------------------------------------------------------

def test_loss_at_zero_beta_balanced():
    # sigmoid(0) = 1/2, so each residual is 1/4 regardless of labels
    feats = np.column_stack([np.ones(8), np.arange(8.0)])
    labels = np.array([0, 1] * 4, dtype=float)
    loss, grad = dise.objective_and_gradient(np.zeros(2), feats, labels, 0.0)
    assert math.isclose(loss, 0.25, rel_tol=1e-14)
    assert grad.shape == (2,)


def test_ridge_term():
    feats = np.ones((4, 1))
    labels = np.array([1.0, 1.0, 1.0, 1.0])
    beta = np.array([2.0])
    l0, g0 = dise.objective_and_gradient(beta, feats, labels, 0.0)
    l1, g1 = dise.objective_and_gradient(beta, feats, labels, 0.5)
    assert math.isclose(l1 - l0, 0.5 * 4.0, rel_tol=1e-12)
    assert math.isclose(g1[0] - g0[0], 2.0 * 0.5 * 2.0, rel_tol=1e-12)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(12)
    for _ in range(20):
        n = int(rng.integers(5, 60))
        d = int(rng.integers(1, 12))
        feats = rng.standard_normal((n, d))
        labels = rng.integers(0, 2, n).astype(float)
        beta = rng.standard_normal(d)
        lam = float(rng.uniform(0, 0.3))
        _, grad = dise.objective_and_gradient(beta, feats, labels, lam)
        h = 1e-5
        for j in range(d):
            e = np.zeros(d)
            e[j] = h
            lp, _ = dise.objective_and_gradient(beta + e, feats, labels, lam)
            lm, _ = dise.objective_and_gradient(beta - e, feats, labels, lam)
            fd = (lp - lm) / (2 * h)
            assert math.isclose(grad[j], fd, rel_tol=1e-5, abs_tol=1e-8)


def test_objective_overflow_safe():
    feats = np.array([[1.0, 1000.0], [1.0, -1000.0]])
    labels = np.array([1.0, 0.0])
    loss, grad = dise.objective_and_gradient(np.array([0.0, 5.0]), feats, labels, 0.0)
    assert math.isfinite(loss) and np.all(np.isfinite(grad))


def test_objective_validation():
    feats = np.ones((3, 2))
    labels = np.zeros(3)
    with pytest.raises(ConfigError):
        dise.objective_and_gradient(np.zeros(2), feats, labels, -1.0)
    with pytest.raises(DimensionMismatch):
        dise.objective_and_gradient(np.zeros(3), feats, labels, 0.0)


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------

def test_fit_requires_two_classes():
    cfg = dise.DiseConfig(feature_spec=quad_spec())
    with pytest.raises(DegenerateLabels):
        dise.fit(cfg, np.random.default_rng(0).standard_normal((10, 1)), np.ones(10))


def test_fit_monotone_descent():
    real, synth = labeled_1d_pair(1.0, 500, 0)
    cfg = dise.DiseConfig(feature_spec=quad_spec())
    data = np.concatenate([real, synth]).reshape(-1, 1)
    labels = np.concatenate([np.ones(500), np.zeros(500)])
    clf = dise.fit(cfg, data, labels)
    hist = np.array(clf.objective_history)
    assert hist.size >= 2
    assert hist[0] == pytest.approx(0.25 + clf.lam * 0.0)
    assert np.all(np.diff(hist) <= 1e-12)
    assert clf.train_loss <= hist[0]


def test_fit_recovers_separating_direction():
    real, synth = labeled_1d_pair(2.0, 2000, 1)
    cfg = dise.DiseConfig(feature_spec=quad_spec(), lam=0.0)
    data = np.concatenate([real, synth]).reshape(-1, 1)
    labels = np.concatenate([np.ones(2000), np.zeros(2000)])
    clf = dise.fit(cfg, data, labels)
    # real class sits at -2: the slope on x must be negative
    assert clf.beta[1] < 0
    acc = np.mean(clf.predict(data) == labels)
    assert acc > 0.95


def test_auto_lambda_value():
    cfg = dise.DiseConfig(feature_spec=quad_spec(2), lambda_scale=1.0)
    n = 1000
    assert math.isclose(cfg.resolve_lambda(n), 6 * math.log(n) / n, rel_tol=1e-12)
    cfg2 = dise.DiseConfig(feature_spec=quad_spec(2), lam=0.01)
    assert cfg2.resolve_lambda(n) == 0.01


def test_config_validation():
    with pytest.raises(ConfigError):
        dise.DiseConfig(feature_spec=quad_spec(), eval_fraction=1.5)
    with pytest.raises(ConfigError):
        dise.DiseConfig(feature_spec=quad_spec(), grad_tol=0.0)
    with pytest.raises(ConfigError):
        dise.DiseConfig(feature_spec=quad_spec(), lam=-0.1)


def test_standardize_does_not_change_decision_function_much():
    real, synth = labeled_1d_pair(0.8, 3000, 2)
    data = np.concatenate([real, synth]).reshape(-1, 1)
    labels = np.concatenate([np.ones(3000), np.zeros(3000)])
    a = dise.fit(dise.DiseConfig(feature_spec=quad_spec(), lam=0.0), data, labels)
    b = dise.fit(
        dise.DiseConfig(feature_spec=quad_spec(), lam=0.0, standardize=False), data, labels
    )
    agree = np.mean(a.predict(data) == b.predict(data))
    assert agree > 0.99


# ---------------------------------------------------------------------------
# estimate_tv
# ---------------------------------------------------------------------------

def test_estimate_tv_close_to_truth_1d():
    # N(-1,1) vs N(1,1): TV = 2 Phi(1) - 1 = 0.6826894921370859
    real, synth = labeled_1d_pair(1.0, 10_000, 3)
    est = dise.estimate_tv(dise.DiseConfig(feature_spec=quad_spec()), real, synth, seed=0)
    assert est.method == "dise"
    assert abs(est.tv - 0.6826894921370859) < 0.03
    assert est.tv == pytest.approx(max(0.0, 1.0 - 2.0 * est.risk))
    assert est.diagnostics["eval_mode"] == "internal_split"


def test_estimate_tv_identical_sets_near_zero():
    rng = ds.rng_from(4)
    real = rng.standard_normal(8000)
    synth = rng.standard_normal(8000)
    est = dise.estimate_tv(dise.DiseConfig(feature_spec=quad_spec()), real, synth, seed=0)
    assert est.tv < 0.05


def test_estimate_tv_deterministic_given_seed():
    real, synth = labeled_1d_pair(0.5, 2000, 5)
    cfg = dise.DiseConfig(feature_spec=quad_spec())
    a = dise.estimate_tv(cfg, real, synth, seed=11)
    b = dise.estimate_tv(cfg, real, synth, seed=11)
    assert a.tv == b.tv and a.risk == b.risk


def test_estimate_tv_label_swap_symmetry():
    # mirrored data with swapped roles must give the identical estimate
    real, synth = labeled_1d_pair(0.7, 3000, 6)
    cfg = dise.DiseConfig(feature_spec=quad_spec())
    rng = ds.rng_from(7)
    er = rng.normal(-0.7, 1.0, 1500)
    es = rng.normal(0.7, 1.0, 1500)
    a = dise.estimate_tv(cfg, real, synth, seed=0, eval_sets=(er, es))
    b = dise.estimate_tv(cfg, -synth, -real, seed=0, eval_sets=(-es, -er))
    assert abs(a.tv - b.tv) <= 1e-12


def test_estimate_tv_external_eval_sets():
    real, synth = labeled_1d_pair(1.0, 4000, 8)
    er, es = labeled_1d_pair(1.0, 4000, 9)
    est = dise.estimate_tv(
        dise.DiseConfig(feature_spec=quad_spec()), real, synth, seed=0, eval_sets=(er, es)
    )
    assert est.diagnostics["eval_mode"] == "external"
    assert est.n_eval == 8000
    assert abs(est.tv - 0.6827) < 0.03


def test_estimate_tv_input_validation():
    cfg = dise.DiseConfig(feature_spec=quad_spec())
    with pytest.raises(DegenerateLabels):
        dise.estimate_tv(cfg, np.empty(0), np.ones(5), seed=0)
    cfg2 = dise.DiseConfig(feature_spec=quad_spec(2))
    with pytest.raises(DimensionMismatch):
        dise.estimate_tv(cfg2, np.ones((5, 2)), np.ones((5, 3)), seed=0)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_classifier_json_roundtrip():
    real, synth = labeled_1d_pair(1.0, 500, 10)
    data = np.concatenate([real, synth]).reshape(-1, 1)
    labels = np.concatenate([np.ones(500), np.zeros(500)])
    clf = dise.fit(dise.DiseConfig(feature_spec=quad_spec()), data, labels)
    back = dise.FittedClassifier.from_json(clf.to_json())
    np.testing.assert_array_equal(back.beta, clf.beta)
    assert back.feature_spec == clf.feature_spec
    assert back.lam == clf.lam
    np.testing.assert_array_equal(back.predict(data), clf.predict(data))


def test_classifier_json_rejects_bad_version():
    doc = json.loads(
        dise.FittedClassifier(
            beta=np.zeros(3),
            feature_spec=quad_spec(),
            train_loss=0.25,
            iterations=0,
            converged=True,
            lam=0.0,
        ).to_json()
    )
    doc["format_version"] = 99
    with pytest.raises(ConfigError):
        dise.FittedClassifier.from_json(json.dumps(doc))
    with pytest.raises(ConfigError):
        dise.FittedClassifier.from_json("{}")
