"""Coordinate-descent lasso: KKT certificates and closed-form checks."""

import numpy as np
import pytest

from gaitcausal import (
    DimensionMismatch,
    NonConvergence,
    adaptive_lasso_fit,
    full_shrinkage_lambda,
    kkt_residual,
    mle_estimate,
)
from gaitcausal.granger.lasso import expand_weights, soft_threshold

from _oracles import lasso_objective, random_lasso_instance


def test_soft_threshold_values():
    assert soft_threshold(3.0, 1.0) == 2.0
    assert soft_threshold(-3.0, 1.0) == -2.0
    assert soft_threshold(0.5, 1.0) == 0.0
    assert soft_threshold(-0.5, 1.0) == 0.0
    assert soft_threshold(2.0, 0.0) == 2.0
    arr = soft_threshold(np.array([-2.0, -0.3, 0.0, 0.3, 2.0]), 0.5)
    np.testing.assert_array_equal(arr, [-1.5, 0.0, 0.0, 0.0, 1.5])


def test_kkt_residual_small_at_solution():
    rng = np.random.default_rng(0)
    for _ in range(40):
        x, y, u = random_lasso_instance(rng)
        lam = 0.3 * full_shrinkage_lambda(x, y, u)
        beta = adaptive_lasso_fit(x, y, u, lam)
        assert kkt_residual(x, y, beta, u, lam) < 1e-6


def test_kkt_residual_flags_perturbations():
    rng = np.random.default_rng(1)
    x, y, u = random_lasso_instance(rng, 50, 10)
    lam = 0.2 * full_shrinkage_lambda(x, y, u)
    beta = adaptive_lasso_fit(x, y, u, lam)
    wrong = beta + 0.05
    assert kkt_residual(x, y, wrong, u, lam) > 1e-3


def test_objective_beats_random_perturbations():
    rng = np.random.default_rng(2)
    for _ in range(10):
        x, y, u = random_lasso_instance(rng)
        lam = 0.25 * full_shrinkage_lambda(x, y, u)
        beta = adaptive_lasso_fit(x, y, u, lam)
        best = lasso_objective(x, y, beta, lam, u)
        for _ in range(100):
            step = rng.normal(size=beta.size)
            step *= rng.uniform(1e-4, 1e-1) / np.linalg.norm(step)
            assert lasso_objective(x, y, beta + step, lam, u) >= best - 1e-12


def test_zero_penalty_recovers_least_squares():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(60, 8))
    y = rng.normal(size=60)
    beta = adaptive_lasso_fit(x, y, np.ones(8), 0.0, coef_tol=1e-14)
    ols = np.linalg.lstsq(x, y, rcond=None)[0]
    np.testing.assert_allclose(beta, ols, atol=1e-8)


def test_full_shrinkage_bound():
    rng = np.random.default_rng(4)
    for _ in range(30):
        x, y, u = random_lasso_instance(rng)
        bound = full_shrinkage_lambda(x, y, u)
        assert bound == np.max(np.abs(x.T @ y) / u)
        at = adaptive_lasso_fit(x, y, u, bound)
        above = adaptive_lasso_fit(x, y, u, 1.5 * bound)
        assert np.all(at == 0.0)
        assert np.all(above == 0.0)
        below = adaptive_lasso_fit(x, y, u, 0.99 * bound)
        assert np.any(below != 0.0)


def test_warm_start_agrees_with_cold_start():
    rng = np.random.default_rng(5)
    x, y, u = random_lasso_instance(rng, 70, 15)
    lam = 0.3 * full_shrinkage_lambda(x, y, u)
    cold = adaptive_lasso_fit(x, y, u, lam)
    warm = adaptive_lasso_fit(x, y, u, lam,
                              warm_start=rng.normal(size=15))
    np.testing.assert_allclose(cold, warm, atol=1e-7)
    assert kkt_residual(x, y, warm, u, lam) < 1e-6


def test_fit_is_deterministic():
    rng = np.random.default_rng(6)
    x, y, u = random_lasso_instance(rng, 40, 12)
    lam = 0.4 * full_shrinkage_lambda(x, y, u)
    a = adaptive_lasso_fit(x, y, u, lam)
    b = adaptive_lasso_fit(x, y, u, lam)
    np.testing.assert_array_equal(a, b)


def test_sweep_budget_raises():
    rng = np.random.default_rng(7)
    base = rng.normal(size=(80, 1))
    x = base + 0.01 * rng.normal(size=(80, 20))
    y = rng.normal(size=80)
    with pytest.raises(NonConvergence):
        adaptive_lasso_fit(x, y, np.ones(20), 1e-6, max_sweeps=1)


def test_expand_weights():
    np.testing.assert_array_equal(expand_weights(np.ones(4), 4), np.ones(4))
    per_block = expand_weights(np.array([1.0, 2.0]), 4, lag=2)
    np.testing.assert_array_equal(per_block, [1.0, 1.0, 2.0, 2.0])
    with pytest.raises(DimensionMismatch):
        expand_weights(np.array([1.0, 2.0, 3.0]), 4, lag=2)


def test_mle_exact_on_orthonormal_design():
    # Exactly orthonormal columns: embedded identity rows.
    x = np.zeros((9, 4))
    for k in range(4):
        x[2 * k, k] = 1.0
    y = np.arange(9, dtype=float)
    beta = mle_estimate(x, y)
    np.testing.assert_allclose(beta, x.T @ y, atol=1e-12)


def test_mle_matches_lstsq_and_survives_collinearity():
    rng = np.random.default_rng(8)
    x = rng.normal(size=(50, 6))
    y = rng.normal(size=50)
    np.testing.assert_allclose(mle_estimate(x, y),
                               np.linalg.lstsq(x, y, rcond=None)[0],
                               atol=1e-8)
    xc = np.hstack([x, x[:, :1]])
    beta = mle_estimate(xc, y)
    assert np.all(np.isfinite(beta))
    # ridge-regularized solution still reproduces the fitted values
    fitted = xc @ beta
    target = x @ np.linalg.lstsq(x, y, rcond=None)[0]
    np.testing.assert_allclose(fitted, target, atol=1e-3)
