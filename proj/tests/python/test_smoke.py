"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import oudrift as od


def test_version():
    assert od.__version__


def test_model_roundtrip():
    model = od.generate_sparse_stable(5, 8, 0.5, 1)
    assert model.d == 5
    assert model.s0 == 8
    assert model.a0.shape == (5, 5)
    cert = od.check_assumption_h(model.a0)
    assert cert.holds()
    assert cert.r0 >= 0.5 - 1e-9


def test_lyapunov_scalar():
    c = od.solve_lyapunov(np.array([[0.5]]))
    assert c[0, 0] == pytest.approx(1.0)
    with pytest.raises(od.DomainError):
        od.solve_lyapunov(np.array([[-1.0]]))


def test_scalar_estimators():
    stats = od.SufficientStats(np.array([[1.0]]), np.array([[-1.0]]), 1.0)
    assert od.mle(stats).a_hat[0, 0] == pytest.approx(1.0)
    assert od.lasso(stats, 0.4).a_hat[0, 0] == pytest.approx(0.6, abs=1e-6)
    assert od.dantzig(stats, 0.4).a_hat[0, 0] == pytest.approx(0.6, abs=1e-6)
    assert od.soft_threshold(1.2, 0.5) == pytest.approx(0.7)


def test_simulate_estimate_pipeline():
    model = od.generate_sparse_stable(3, 6, 0.5, 11)
    cfg = od.SimConfig()
    cfg.t_horizon = 20.0
    cfg.n_steps = 20000
    cfg.scheme = od.Scheme.Exact
    cfg.seed = 5
    path = od.simulate_path(model, cfg)
    assert path.states.shape == (3, 20001)
    stats = od.sufficient_stats(path)
    lam = od.lambda_rule_plugin(3, stats.t_horizon, 0.1, stats)
    fit = od.lasso(stats, lam)
    assert fit.status == od.SolveStatus.Converged
    assert od.dantzig_feasibility(fit.a_hat, stats) <= lam + 1e-6
    metrics = od.support_metrics(fit.a_hat, model.a0, 1e-6)
    assert 0.0 <= metrics.f1 <= 1.0


def test_lambda_rule_value():
    c = od.ErgodicConstants()
    c.m_small = c.k_small = 1.0
    lam = od.lambda_rule(1, 300.0, 0.1, c)
    assert lam == pytest.approx(2.0 * math.sqrt(3.0 * math.log(20.0) / 300.0))


def test_bounds_spot_values():
    c = od.ErgodicConstants()
    c.c_inf = np.eye(1)
    c.r0 = c.p0 = c.k_big = c.k_small = c.m_small = c.m_big = 1.0
    assert od.tail_exponent(1.0, c) == 0.0625
    assert od.re_time_threshold(0.1, 2, 1.0, c, 10).prefactor == 211248.0
    bounds = od.oracle_bounds(2, 0.5, 1.0, c)
    assert bounds.dantzig_oracle_const == pytest.approx(2200.5)


def test_cone_and_re():
    assert od.in_cone(np.eye(2), od.ConeSpec(2, 1.0))
    assert not od.in_cone(np.ones((2, 2)), od.ConeSpec(1, 1.0))
    value = od.restricted_eigenvalue_empirical(np.eye(2), od.ConeSpec(2, 1.0), 20, 0)
    assert value == 1.0
