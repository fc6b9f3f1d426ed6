import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from msforecast import SimSetup, bfgs_minimize, gen_setup, lag_set_from_period, ModelSpec
from msforecast.core import DomainError
from msforecast.model import make_objective
from msforecast.optimizer import OptimOptions, TERMINATIONS


def quadratic(A, b):
    return lambda x: (0.5 * x @ A @ x - b @ x, A @ x - b)


def rosenbrock(x):
    a, b = x
    f = (1 - a) ** 2 + 100 * (b - a * a) ** 2
    g = np.array([-2 * (1 - a) - 400 * a * (b - a * a), 200 * (b - a * a)])
    return f, g


def test_shifted_sphere():
    c = np.array([3.0, -1.0])
    res = bfgs_minimize(lambda x: (float((x - c) @ (x - c)), 2 * (x - c)), np.zeros(2))
    np.testing.assert_allclose(res.theta_star, c, atol=1e-8)
    assert res.iterations <= 3
    assert res.converged


def test_rosenbrock():
    res = bfgs_minimize(rosenbrock, np.array([-1.2, 1.0]), grad_tol=1e-12)
    np.testing.assert_allclose(res.theta_star, [1.0, 1.0], atol=1e-5)


def _check_steps(res, c1=1e-4, c2=0.9):
    for s in res.steps:
        assert s.armijo(c1)
        assert s.curvature(c2)
        assert s.f_after <= s.f_before


def test_steps_satisfy_wolfe_on_rosenbrock():
    _check_steps(bfgs_minimize(rosenbrock, np.array([-1.2, 1.0])))


def test_ms_objective_monotone():
    x = gen_setup(SimSetup("trig-single", 700, seed=9)).series
    spec = ModelSpec(2, 2, (lag_set_from_period(50, 6, 3),))
    f = make_objective(x, spec)
    res = bfgs_minimize(f, np.zeros(spec.n_params))
    assert res.objective <= f(np.zeros(spec.n_params))[0]
    _check_steps(res)
    values = [s.f_after for s in res.steps]
    assert all(b <= a for a, b in zip(values, values[1:]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**31))
def test_quadratic_finite_termination(d, seed):
    # exact line searches make BFGS terminate on quadratics
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.normal(size=(d, d)))
    A = Q @ np.diag(rng.uniform(0.1, 10.0, d)) @ Q.T
    b = rng.normal(size=d)
    res = bfgs_minimize(quadratic(A, b), np.zeros(d), grad_tol=1e-12, max_iter=d + 2, refine=True)
    np.testing.assert_allclose(res.theta_star, np.linalg.solve(A, b), atol=1e-8)


def test_result_invariants():
    res = bfgs_minimize(rosenbrock, np.array([-1.2, 1.0]), max_iter=5)
    assert res.termination == "max_iter"
    assert res.iterations == 5 and not res.converged
    assert res.termination in TERMINATIONS
    assert np.isfinite(res.objective)


def test_nonfinite_region_backtracks():
    # f is +inf beyond x = 2; the minimum at 1.5 must still be found
    def f(x):
        if x[0] > 2.0:
            return np.inf, np.array([np.nan])
        return (x[0] - 1.5) ** 2, np.array([2 * (x[0] - 1.5)])

    res = bfgs_minimize(f, np.array([-10.0]))
    assert res.theta_star[0] == pytest.approx(1.5, abs=1e-6)


def test_line_search_failure_keeps_best_point():
    calls = {"n": 0}

    def f(x):
        calls["n"] += 1
        if calls["n"] > 1:
            return np.nan, np.full(1, np.nan)
        return float(x[0] ** 2), 2 * x

    res = bfgs_minimize(f, np.array([4.0]))
    assert res.termination == "line_search_fail"
    assert res.theta_star[0] == 4.0 and res.objective == 16.0


def test_nonfinite_start_rejected():
    with pytest.raises(DomainError):
        bfgs_minimize(lambda x: (np.nan, x), np.zeros(2))


def test_multistart_is_seeded():
    opts = OptimOptions(n_starts=3, seed=5, max_iter=20)
    a = bfgs_minimize(rosenbrock, np.array([-1.2, 1.0]), opts)
    b = bfgs_minimize(rosenbrock, np.array([-1.2, 1.0]), opts)
    np.testing.assert_array_equal(a.theta_star, b.theta_star)
    single = bfgs_minimize(rosenbrock, np.array([-1.2, 1.0]), max_iter=20)
    assert a.objective <= single.objective
