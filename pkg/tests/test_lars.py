import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lasso_dantzig import lars
from lasso_dantzig.lars import Event
from lasso_dantzig.linalg import cholesky_factor
from conftest import random_instance
from oracles import lasso_cd, soft_threshold


def orthonormal_instance(seed, n=30, p=8):
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((n, p)))
    y = Q @ rng.normal(0, 3, p) + 0.5 * rng.standard_normal(n)
    return Q, y


def test_orthonormal_path_is_soft_thresholding():
    X, y = orthonormal_instance(0)
    path = lars.lasso_path(X, y)
    z = X.T @ y
    for lam in np.linspace(0, np.abs(z).max(), 23):
        np.testing.assert_allclose(lars.beta_at_lambda(path, lam), soft_threshold(z, lam), atol=1e-10)


def test_single_variable_path():
    rng = np.random.default_rng(1)
    x = rng.standard_normal((20, 1))
    y = rng.standard_normal(20)
    path = lars.lasso_path(x, y)
    assert len(path) == 2
    ols = (x[:, 0] @ y) / (x[:, 0] @ x[:, 0])
    np.testing.assert_allclose(path.coefs[-1], [ols], rtol=1e-12)
    np.testing.assert_allclose(lars.beta_at_lambda(path, path.lambdas[0] / 2), [ols / 2], rtol=1e-12)


def test_equiangular_single_and_orthonormal_pair():
    X, _ = orthonormal_instance(2)
    w, a, unit = lars.equiangular_direction(X, [3], [1], cholesky_factor(np.eye(1)))
    assert unit == pytest.approx(1.0)
    np.testing.assert_allclose(X[:, [3]] @ w, X[:, 3])
    w, a, unit = lars.equiangular_direction(X, [0, 1], [1, -1], cholesky_factor(np.eye(2)))
    assert unit == pytest.approx(1 / np.sqrt(2))
    np.testing.assert_allclose(a[[0, 1]], [1 / np.sqrt(2), -1 / np.sqrt(2)], atol=1e-14)


def test_equiangular_random_active_set():
    X, _ = random_instance(3, n=30, p=12)
    active, signs = [1, 4, 7, 9], [1, -1, -1, 1]
    G = X[:, active].T @ X[:, active]
    w, a, unit = lars.equiangular_direction(X, active, signs, cholesky_factor(G))
    u = X[:, active] @ w
    assert np.linalg.norm(u) == pytest.approx(1.0)
    np.testing.assert_allclose(a[active] * np.array(signs), unit, atol=1e-10)


def test_step_length_finish_when_nothing_can_happen():
    c = np.array([2.0, -2.0])
    gamma, event, idx = lars.step_length(c, np.array([0.5, -0.5]), 2.0, np.array([1.0, -1.0]),
                                         np.array([0.3, -0.2]), [0, 1], 0.5)
    assert event is Event.FINISH and idx is None
    assert gamma == pytest.approx(4.0)


def test_step_length_drop_precedes_joins():
    # active {0, 1}; coefficient 0 reaches zero at gamma = 0.5 / 0.5 = 1,
    # inactive variable 2 would join at (5 - 1) / (1 - 0) = 4
    c = np.array([5.0, 5.0, 1.0])
    a = np.array([1.0, 1.0, 0.0])
    gamma, event, idx = lars.step_length(c, a, 5.0, np.array([0.5, 2.0]), np.array([-0.5, 1.0]), [0, 1], 1.0)
    assert (event, idx) == (Event.DROP, 0)
    assert gamma == pytest.approx(1.0)


def test_step_length_tie_goes_to_lowest_index():
    c = np.array([3.0, 1.0, 1.0, -1.0])
    a = np.array([1.0, 0.0, 0.0, 0.0])
    gamma, event, idx = lars.step_length(c, a, 3.0, np.array([0.2]), np.array([1.0]), [0], 1.0)
    assert (event, idx) == (Event.JOIN, 1)
    assert gamma == pytest.approx(2.0)


def test_lasso_path_lambda_endpoints(diabetes_l2):
    X, y = diabetes_l2.X, diabetes_l2.y
    path = lars.lasso_path(X, y)
    assert path.lambdas[0] == pytest.approx(np.abs(X.T @ y).max(), rel=1e-14)
    assert np.all(path.coefs[0] == 0)
    assert np.all(np.diff(path.lambdas) < 0)
    np.testing.assert_array_equal(lars.beta_at_lambda(path, path.lambdas[0]), np.zeros(X.shape[1]))


def test_diabetes64_matched_s_lasso_coefficients(diabetes_l2):
    path = lars.lasso_path(diabetes_l2.X, diabetes_l2.y)
    b = lars.beta_at_l1(path, 1734.79)
    assert np.abs(b).sum() == pytest.approx(1734.79, abs=1e-8)
    # reference values, 0-based indices 2, 8, 3
    assert b[2] == pytest.approx(502.8695, abs=0.05)
    assert b[8] == pytest.approx(463.4805, abs=0.05)
    assert b[3] == pytest.approx(233.5998, abs=0.05)


def test_beta_at_l1_limits_and_norm():
    X, y = random_instance(4, n=30, p=10)
    path = lars.lasso_path(X, y)
    np.testing.assert_array_equal(lars.beta_at_l1(path, 0.0), np.zeros(10))
    np.testing.assert_array_equal(lars.beta_at_l1(path, 10 * path.l1_norms[-1]), path.coefs[-1])
    for s in np.linspace(0, path.l1_norms[-1], 17):
        assert np.abs(lars.beta_at_l1(path, s)).sum() == pytest.approx(s, abs=1e-8)


def test_lambda_zero_gives_ols():
    rng = np.random.default_rng(5)
    X = rng.standard_normal((50, 8))
    y = rng.standard_normal(50)
    path = lars.lasso_path(X, y)
    ols = np.linalg.solve(X.T @ X, X.T @ y)
    np.testing.assert_allclose(lars.beta_at_lambda(path, 0.0), ols, atol=1e-6)


def test_kkt_check_cases():
    X, y = random_instance(6)
    lam0 = np.abs(X.T @ y).max()
    zero = np.zeros(X.shape[1])
    assert lars.kkt_check(X, y, zero, lam0).passed
    r = lars.kkt_check(X, y, zero, lam0 / 2)
    assert not r.passed and r.max_inactive_excess > 0


def test_kkt_detects_wrong_sign():
    X, y = orthonormal_instance(7)
    path = lars.lasso_path(X, y)
    b = lars.beta_at_lambda(path, path.lambdas[2])
    j = int(np.flatnonzero(b)[0])
    b[j] = -b[j]
    assert not lars.kkt_check(X, y, b, path.lambdas[2]).passed


def test_drop_event_happens_and_variable_can_rejoin():
    found = False
    for seed in range(200):
        X, y = random_instance(seed, n=20, p=30)
        path = lars.lasso_path(X, y)
        drops = [s.event_index for s in path.segments if s.event is Event.DROP]
        if drops:
            found = True
            for s in path.segments:
                assert lars.kkt_check(X, y, s.beta, s.lam).passed
            break
    assert found, "no drop event in 200 random paths"


def test_n_less_than_p_path_interpolates():
    X, y = random_instance(8, n=12, p=40)
    path = lars.lasso_path(X, y)
    assert path.lambdas[-1] == 0.0
    assert len(path.segments[-1].active) <= 11
    r = y - X @ path.coefs[-1]
    assert np.linalg.norm(r) < 1e-8 * np.linalg.norm(y)


def test_collinear_columns_raise():
    rng = np.random.default_rng(9)
    X = rng.standard_normal((15, 3))
    X[:, 2] = X[:, 0]
    y = X[:, 0] * 3 + X[:, 1] + 0.1 * rng.standard_normal(15)
    with pytest.raises(lars.CollinearActiveSet):
        lars.lasso_path(X, y)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_path_invariants(seed):
    X, y = random_instance(seed)
    path = lars.lasso_path(X, y)
    assert np.all(np.diff(path.lambdas) < 0)
    for seg in path.segments:
        g = X.T @ (y - X @ seg.beta)
        if seg.active:
            np.testing.assert_allclose(np.abs(g[list(seg.active)]), seg.lam, atol=1e-8)
        assert np.abs(g).max() <= seg.lam + 1e-8
    # continuity: midpoints in lambda equal averages of breakpoint coefficients
    for k in range(len(path) - 1):
        mid = 0.5 * (path.lambdas[k] + path.lambdas[k + 1])
        np.testing.assert_allclose(lars.beta_at_lambda(path, mid),
                                   0.5 * (path.coefs[k] + path.coefs[k + 1]), atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), frac=st.floats(0.05, 0.95))
def test_matches_coordinate_descent(seed, frac):
    X, y = random_instance(seed)
    path = lars.lasso_path(X, y)
    lam = frac * path.lambdas[0]
    assert np.max(np.abs(lars.beta_at_lambda(path, lam) - lasso_cd(X, y, lam))) <= 1e-6
