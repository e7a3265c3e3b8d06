import math
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lasso_alternates.datamodel import CLASSIFICATION, Dataset, FeatureMatrix
from lasso_alternates.loss import LossModel
from lasso_alternates.report import solution_json
from lasso_alternates.solver import (
    IncompatibleLossError,
    LassoSolution,
    NonConvergenceError,
    NonConvergenceWarning,
    RegParam,
    SolverOptions,
    fit_lasso,
    kkt_residual,
    null_threshold,
    solve_univariate,
    univariate_residual,
)
from lasso_alternates.synthetic import gaussian_classification, gaussian_regression

from oracles import brute_univariate, dense_kkt, dense_objective, golden_section, univariate_objective

SQ = LossModel("squared")
LOG = LossModel("logistic")


def col(values):
    values = np.asarray(values, dtype=float)
    rows = np.flatnonzero(values)
    return rows, values[rows]


def test_regparam():
    assert RegParam(0.001, per_sample=True).effective(1168) == 0.001 * 1168
    assert RegParam(2.5).effective(10) == 2.5
    with pytest.raises(ValueError):
        RegParam(-1.0)
    with pytest.raises(ValueError):
        SolverOptions(kkt_tolerance=0.0)


def test_null_threshold_gives_zero_solution():
    ds = gaussian_regression(np.random.default_rng(0), 30, 12)
    lam = null_threshold(ds, SQ)
    np.testing.assert_allclose(lam, np.max(np.abs(ds.matrix.toarray().T @ ds.y)), rtol=1e-12)
    for rho in (lam, 2 * lam):
        sol = fit_lasso(ds, SQ, RegParam(rho))
        assert sol.converged and sol.sweeps_used == 0
        assert len(sol.support) == 0
        assert kkt_residual(ds, SQ, RegParam(rho), np.zeros(ds.p)) == 0.0


def test_two_point_example_matches_grid():
    ds = Dataset(FeatureMatrix.from_dense([[1.0], [1.0]]), [1.0, 1.0])
    sol = fit_lasso(ds, SQ, RegParam(1.0))
    grid = np.arange(-2, 2, 1e-5)
    oracle = grid[np.argmin((grid - 1) ** 2 + np.abs(grid))]
    assert oracle == pytest.approx(0.5, abs=1e-5)
    assert sol.beta[0] == pytest.approx(0.5, abs=1e-12)
    assert list(sol.support) == [0]


def test_separable_logistic_without_penalty_is_flagged():
    X = np.array([[1.0], [2.0], [-1.0], [-3.0]])
    ds = Dataset(FeatureMatrix.from_dense(X), [1.0, 1.0, -1.0, -1.0], CLASSIFICATION)
    with pytest.warns(NonConvergenceWarning):
        sol = fit_lasso(ds, LOG, RegParam(0.0), SolverOptions(max_sweeps=5))
    assert not sol.converged
    assert sol.kkt > 1e-6
    assert sol.sweeps_used == 5


def test_incompatible_loss():
    ds = gaussian_regression(np.random.default_rng(1), 10, 3)
    with pytest.raises(IncompatibleLossError):
        fit_lasso(ds, LOG, RegParam(1.0))


def test_kkt_residual_example():
    # X_0^T y = 2, column 1 has X_1^T y = 0.25
    X = np.array([[1.0, 0.25], [1.0, 0.0], [0.0, 0.0]])
    y = np.array([1.0, 1.0, 0.0])
    ds = Dataset(FeatureMatrix.from_dense(X), y)
    got = kkt_residual(ds, SQ, RegParam(0.5), np.zeros(2))
    assert got == pytest.approx(1.5, abs=1e-15)
    assert dense_kkt("squared", X, y, np.zeros(2), 0.5) == pytest.approx(1.5, abs=1e-15)


@pytest.mark.parametrize("kind", ["squared", "logistic"])
def test_kkt_residual_matches_dense_reference(kind):
    rng = np.random.default_rng(5)
    for _ in range(20):
        ds = (gaussian_regression if kind == "squared" else gaussian_classification)(rng, 15, 8)
        X = ds.matrix.toarray()
        beta = rng.normal(size=8) * (rng.random(8) < 0.5)
        rho = float(rng.uniform(0.1, 3.0))
        assert kkt_residual(ds, LossModel(kind), RegParam(rho), beta) == pytest.approx(
            max(0.0, dense_kkt(kind, X, ds.y, beta, rho)), abs=1e-12)


@pytest.mark.parametrize("kind", ["squared", "logistic"])
def test_fit_properties(kind):
    rng = np.random.default_rng(7)
    loss = LossModel(kind)
    make = gaussian_regression if kind == "squared" else gaussian_classification
    for frac in (0.1, 0.3, 0.6):
        ds = make(rng, 40, 60)
        reg = RegParam(frac * null_threshold(ds, loss))
        sol = fit_lasso(ds, loss, reg)
        assert sol.converged
        assert kkt_residual(ds, loss, reg, sol.beta) <= 1e-6
        hist = sol.objective_history
        assert np.all(np.diff(hist) <= 1e-12 * np.abs(hist[:-1]))
        dense = dense_objective(kind, ds.matrix.toarray(), ds.y, sol.beta, reg.effective(ds.n))
        assert sol.objective == pytest.approx(dense, rel=1e-10)
        np.testing.assert_array_equal(sol.support, np.flatnonzero(sol.beta != 0))
        again = fit_lasso(ds, loss, reg)
        assert again.beta.tobytes() == sol.beta.tobytes()


def test_duplicate_column_prefers_lower_index():
    rng = np.random.default_rng(2)
    x = rng.normal(size=50)
    X = np.column_stack([rng.normal(size=50), x, x, rng.normal(size=50)])
    ds = Dataset(FeatureMatrix.from_dense(X), x + 0.1 * rng.normal(size=50))
    sol = fit_lasso(ds, SQ, RegParam(0.3 * null_threshold(ds, SQ)))
    assert sol.beta[1] != 0.0
    assert sol.beta[2] == 0.0


def test_zero_column_is_ignored():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(20, 3))
    X[:, 1] = 0.0
    ds = Dataset(FeatureMatrix.from_dense(X), X[:, 0] + X[:, 2])
    sol = fit_lasso(ds, SQ, RegParam(0.5))
    assert sol.beta[1] == 0.0 and sol.converged


def test_solution_json_round_trip():
    ds = gaussian_classification(np.random.default_rng(9), 30, 10)
    sol = fit_lasso(ds, LOG, RegParam(0.001, per_sample=True))
    text = solution_json(sol)
    doc = json.loads(text)
    assert set(doc) >= {"rho", "loss", "beta", "objective", "converged"}
    assert doc["rho"] == 0.001 * 30
    back = LassoSolution.from_dict(doc, ds)
    np.testing.assert_array_equal(back.beta, sol.beta)
    np.testing.assert_array_equal(back.fitted, sol.fitted)
    assert solution_json(back) == text
    other = gaussian_classification(np.random.default_rng(9), 30, 11)
    with pytest.raises(ValueError, match="30x10"):
        LassoSolution.from_dict(doc, other)


# -- univariate --------------------------------------------------------------------


def test_univariate_squared_example():
    z, y, x = np.zeros(2), np.array([2.0, 0.0]), np.array([1.0, 0.0])
    grid = np.arange(-5, 5 + 1e-9, 1e-4)
    f = univariate_objective("squared", z, y, x, 0.5)
    oracle = grid[np.argmin([f(b) for b in grid])]
    assert oracle == pytest.approx(1.5, abs=1e-4)
    assert solve_univariate(SQ, z, y, col(x), RegParam(0.5)) == 1.5
    assert solve_univariate(SQ, z, y, col(x), RegParam(3.0)) == 0.0


def test_univariate_logistic_example():
    got = solve_univariate(LOG, [0.0], [1.0], col([1.0]), RegParam(0.1))
    oracle = golden_section(univariate_objective("logistic", [0.0], [1.0], [1.0], 0.1), 0.0, 10.0)
    assert oracle == pytest.approx(math.log(9), abs=1e-7)
    assert got == pytest.approx(math.log(9), abs=1e-9)


def test_univariate_zero_column():
    assert solve_univariate(LOG, [0.0, 1.0], [1.0, -1.0], col([0.0, 0.0]), RegParam(0.1)) == 0.0


def test_univariate_nonconvergence_carries_iterate():
    with pytest.raises(NonConvergenceError) as info:
        solve_univariate(LOG, [0.0], [1.0], col([1.0]), RegParam(0.1), SolverOptions(max_prox_iters=3))
    assert 0.0 < info.value.last_iterate < math.log(9)


def test_univariate_closed_form_rejected_for_logistic():
    with pytest.raises(ValueError):
        solve_univariate(LOG, [0.0], [1.0], col([1.0]), RegParam(0.1), method="closed")


def test_prox_agrees_with_closed_form():
    rng = np.random.default_rng(13)
    for _ in range(1000):
        n = int(rng.integers(1, 12))
        z, y = rng.normal(size=n), rng.normal(size=n)
        x = rng.normal(size=n) * (rng.random(n) < 0.8)
        if not np.any(x):
            continue
        reg = RegParam(float(rng.uniform(0.0, 3.0)))
        closed = solve_univariate(SQ, z, y, col(x), reg, method="closed")
        prox = solve_univariate(SQ, z, y, col(x), reg, method="prox")
        assert abs(prox - closed) <= 1e-8


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["squared", "logistic"]), st.integers(0, 2**32 - 1))
def test_univariate_matches_brute_force(kind, seed):
    rng = np.random.default_rng(seed)
    loss = LossModel(kind)
    n = int(rng.integers(1, 8))
    z = rng.normal(size=n)
    y = rng.choice([-1.0, 1.0], size=n) if kind == "logistic" else rng.normal(size=n)
    x = rng.normal(size=n)
    rho = float(rng.uniform(0.01, 1.0))
    got = solve_univariate(loss, z, y, col(x), RegParam(rho))
    oracle = brute_univariate(kind, z, y, x, rho)
    f = univariate_objective(kind, z, y, x, rho)
    assert abs(got - oracle) <= 1e-4
    assert f(got) <= f(oracle) + 1e-8
    assert univariate_residual(loss, z, y, col(x), rho, got) <= 1e-10
