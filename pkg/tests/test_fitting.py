import numpy as np
import pytest

from tcmsizer.errors import Diverged
from tcmsizer.models import get_family
from tcmsizer.numeric import FitProblem, gauss_newton_fit

F1_VTH_W = np.array([0.10471, 0.14941, 2.0794, 0.14273, -0.01878])


def test_exact_start_is_fixed_point():
    f4 = get_family("F4")
    theta = np.array([1.0, 2.0, 3.0])
    x = np.linspace(0.1, 3, 40)
    res = gauss_newton_fit(f4, FitProblem(x, f4.value(x, theta), theta))
    assert res.converged
    assert res.iterations <= 1
    assert res.sse < 1e-28
    np.testing.assert_allclose(res.theta, theta, rtol=1e-12)


def test_recovers_threshold_width_fit():
    f1 = get_family("F1")
    x = np.linspace(1, 50, 200)
    res = gauss_newton_fit(f1, FitProblem(x, f1.value(x, F1_VTH_W), F1_VTH_W * 1.2))
    assert res.converged
    np.testing.assert_allclose(res.theta, F1_VTH_W, rtol=1e-4)
    assert all(b <= a for a, b in zip(res.sse_history, res.sse_history[1:]))


def test_noisy_fit_sse_monotone():
    f4 = get_family("F4")
    rng = np.random.default_rng(3)
    x = np.linspace(0.5, 10, 80)
    y = f4.value(x, [2.0, 1.5, 0.7]) + rng.normal(scale=0.01, size=x.size)
    res = gauss_newton_fit(f4, FitProblem(x, y, [1.0, 1.0, 1.0], tol=1e-10))
    assert res.converged and res.sse > 0
    hist = res.sse_history
    assert all(b <= a for a, b in zip(hist, hist[1:]))
    np.testing.assert_allclose(res.theta, [2.0, 1.5, 0.7], rtol=0.05)


class _WrongJacobian:
    """Jacobian with the sign flipped, so every increment points uphill."""

    family = get_family("F7")

    def value(self, x, theta):
        return self.family.value(x, theta)

    def jacobian(self, x, theta):
        return -self.family.jacobian(x, theta)


def test_inconsistent_jacobian_diverges():
    x = np.linspace(0, 1, 10)
    with pytest.raises(Diverged):
        gauss_newton_fit(_WrongJacobian(), FitProblem(x, 3 * x + 1, [0.0, 0.0]))


def test_iteration_cap_reported():
    f1 = get_family("F1")
    x = np.linspace(1, 50, 200)
    res = gauss_newton_fit(f1, FitProblem(x, f1.value(x, F1_VTH_W), F1_VTH_W * 1.2, max_iter=1))
    assert res.iterations == 1 and not res.converged


@pytest.mark.parametrize("kwargs", [
    dict(xs=[1, 2], ys=[1, 2, 3], theta0=[1]),
    dict(xs=[1, 2], ys=[1, 2], theta0=[1, 2, 3]),
    dict(xs=[1, 2], ys=[1, 2], theta0=[1], tol=0),
    dict(xs=[1, 2], ys=[1, 2], theta0=[1], max_iter=0),
])
def test_problem_validation(kwargs):
    with pytest.raises(ValueError):
        FitProblem(**kwargs)
