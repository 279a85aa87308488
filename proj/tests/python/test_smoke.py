"""Smoke tests for the python bindings; the heavy verification lives in the
C++ suites."""

import math

import numpy as np
import pytest

import kcmtest


def test_simeq_true_theta_exact():
    assert kcmtest.simeq_true_theta(1.0, -1.0, 1.0, 1.0) == (-1.0, 2.0, 1.0, -2.0)


def test_kernels_and_median():
    X = np.array([[0.0], [1.0], [3.0]])
    assert kcmtest.median_heuristic(X) == 2.0
    G = kcmtest.gram(kcmtest.rbf_kernel(1.0), X)
    assert G.shape == (3, 3)
    assert np.array_equal(G, G.T)
    assert np.allclose(np.diag(G), 1.0)
    k = kcmtest.eval_kernel(kcmtest.rbf_kernel(1.0), np.array([0.0]), np.array([2.0]))
    assert k == pytest.approx(math.exp(-2.0))


def test_median_bandwidth_resolution_inside_tests():
    data = kcmtest.gen_reg(60, 3, "hom", seed=5)
    model = kcmtest.ResidualModel("regression", kcmtest.reg_true_theta(3))
    out = kcmtest.kcm_test(model, data, kcmtest.rbf_kernel(), B=200, alpha=0.05, seed=9)
    assert len(out.bootstrap_draws) == 200
    assert 0.0 < out.p_value <= 1.0
    assert out.reject == (out.critical_value < out.statistic)


def test_test_determinism():
    data = kcmtest.gen_simeq(50, seed=11)
    theta = np.array(kcmtest.simeq_true_theta(1.0, -1.0, 1.0, 1.0))
    model = kcmtest.ResidualModel("simeq", theta)
    a = kcmtest.kcm_test(model, data, kcmtest.rbf_kernel(), B=100, seed=3)
    b = kcmtest.kcm_test(model, data, kcmtest.rbf_kernel(), B=100, seed=3, threads=3)
    assert a.statistic == b.statistic
    assert a.bootstrap_draws == b.bootstrap_draws


def test_statistics_agree_with_identity():
    data = kcmtest.gen_reg(40, 2, "het", seed=21)
    model = kcmtest.ResidualModel("regression", np.array([1.0, 1.0]))
    spec = kcmtest.rbf_kernel(1.0)
    H = kcmtest.h_matrix(model, data, spec)
    n = H.shape[0]
    u = kcmtest.mmr_u(model, data, spec)
    v = kcmtest.mmr_v(model, data, spec)
    assert n * n * v == pytest.approx(n * (n - 1) * u + np.trace(H), abs=1e-12)


def test_mmmr_fit_recovers_noiseless_parameter():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(80, 2))
    beta = np.array([2.0, -1.0])
    Z = np.column_stack([X @ beta, X])
    data = kcmtest.Dataset(Z, [1, 2])
    theta_hat, objective = kcmtest.mmmr_fit(
        kcmtest.ResidualModel("regression", np.zeros(2)), data, kcmtest.rbf_kernel()
    )
    assert np.max(np.abs(theta_hat - beta)) < 1e-8
    assert objective == pytest.approx(0.0, abs=1e-10)


def test_iv_solve_analytic_point():
    sol = kcmtest.mmr_iv_solve(
        np.zeros((1, 1)),
        np.array([3.0]),
        np.zeros((1, 1)),
        0.5,
        kcmtest.rbf_kernel(1.0),
        kcmtest.rbf_kernel(1.0),
    )
    assert sol.alpha[0] == pytest.approx(3.0 / 1.5)
    assert sol.predict(np.zeros((1, 1)))[0] == pytest.approx(2.0)


def test_harness_round_trip():
    config = kcmtest.ExperimentConfig()
    config.dgp = "reg_hom"
    config.n_grid = [40]
    config.delta_grid = [0.0]
    config.trials = 4
    config.B = 50
    config.tests = ["kcm"]
    config.master_seed = 13
    config.d = 2
    results = kcmtest.run_power(config)
    assert len(results) == 1
    assert 0.0 <= results[0].rate <= 1.0
    csv = kcmtest.results_csv(results)
    assert csv.startswith("test,dgp,n,delta,trials,rejections,rate,se,seed\n")
    again = kcmtest.run_power(config, 4)
    assert kcmtest.results_csv(again) == csv


def test_error_translation():
    with pytest.raises(kcmtest.DegenerateDataError):
        kcmtest.median_heuristic(np.zeros((4, 2)))
    with pytest.raises(ValueError):
        kcmtest.ResidualModel("nonsense", np.zeros(1))
