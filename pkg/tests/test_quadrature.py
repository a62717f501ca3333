"""Adaptive integration and antiderivative construction."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uncorder import normal, pdf
from uncorder.errors import DomainError
from uncorder.quadrature import GridFunction, antiderivative, integrate


def test_linear_integrand():
    r = integrate(lambda x: x, 0.0, 1.0, tol=1e-10)
    assert abs(r.value - 0.5) < 1e-12
    assert r.abs_error_estimate <= 1e-10


def test_normal_density_mass():
    # 2 Phi(1) - 1 from an independent cdf evaluation
    import scipy.stats as stats

    nd = normal(0, 1)
    r = integrate(lambda x: pdf(nd, x), -1.0, 1.0, tol=1e-10)
    assert abs(r.value - (2 * stats.norm.cdf(1) - 1)) < 1e-10


def test_arctangent_kernel():
    r = integrate(lambda x: 1.0 / (np.pi * (1 + x * x)), 0.0, 1.0, tol=1e-10)
    assert abs(r.value - 0.25) < 1e-12


def test_degenerate_interval_is_zero():
    assert integrate(lambda x: x, 2.0, 2.0).value == 0.0


def test_reversed_limits_rejected():
    with pytest.raises(DomainError):
        integrate(lambda x: x, 1.0, 0.0)


def test_eval_cap_flags_nonconvergence():
    # needle far narrower than the initial panels, no seed points: the cap
    # stops refinement and the estimate must exceed the tolerance
    needle = lambda x: np.exp(-((x - 0.37) ** 2) * 1e12)
    r = integrate(needle, 0.0, 1.0, tol=1e-14, max_evals=300)
    assert r.abs_error_estimate > 1e-14 or r.value == pytest.approx(0.0, abs=1e-12)


def test_seed_points_catch_spikes():
    from uncorder.distributions import breakpoints

    spike = normal(0.5, 1e-4)
    f = lambda x: pdf(spike, x)
    r = integrate(f, 0.0, 1.0, tol=1e-10, points=breakpoints(spike, 0.0, 1.0))
    assert abs(r.value - 1.0) < 1e-9


@settings(max_examples=30, deadline=None, derandomize=True)
@given(
    a=st.floats(-2, 2), b=st.floats(-3, 3), c=st.floats(-1, 1),
    alpha=st.floats(-2, 2), beta=st.floats(-2, 2),
)
def test_linearity(a, b, c, alpha, beta):
    f = lambda x: a * x * x + b * x + c
    g = lambda x: np.sin(x)
    lhs = integrate(lambda x: alpha * f(x) + beta * g(x), 0.0, 2.0, tol=1e-11)
    rf = integrate(f, 0.0, 2.0, tol=1e-11)
    rg = integrate(g, 0.0, 2.0, tol=1e-11)
    combined_err = lhs.abs_error_estimate + abs(alpha) * rf.abs_error_estimate \
        + abs(beta) * rg.abs_error_estimate
    assert abs(lhs.value - (alpha * rf.value + beta * rg.value)) <= combined_err + 1e-12


class TestAntiderivative:
    def test_constant(self):
        h = antiderivative(lambda x: np.ones_like(x), 0.0, np.array([0.0, 1.0, 2.0]))
        np.testing.assert_allclose(h.ys, [0.0, 1.0, 2.0], atol=1e-13)

    def test_uniform_cdf_first_pass(self):
        # cumulative of the uniform(0,1) cdf: x^2/2
        h = antiderivative(lambda x: np.clip(x, 0, 1), 0.0, np.array([0.0, 0.5, 1.0]))
        np.testing.assert_allclose(h.ys, [0.0, 0.125, 0.5], atol=1e-13)

    def test_second_pass_callable(self):
        h = antiderivative(lambda x: x * x / 2.0, 0.0, np.array([0.0, 1.0]))
        np.testing.assert_allclose(h.ys, [0.0, 1.0 / 6.0], atol=1e-13)

    def test_nested_consistency(self):
        grid = np.linspace(0.0, 1.0, 2049)
        f1 = antiderivative(lambda x: np.clip(x, 0, 1), 0.0, grid)
        f2 = antiderivative(f1, 0.0, grid)
        for b in (0.1, 0.5, 1.0):
            assert abs(float(f2(b)) - b ** 3 / 6.0) < 1e-10

    def test_nonnegative_input_gives_nondecreasing_output(self):
        grid = np.linspace(-1.0, 3.0, 257)
        nd = normal(0.5, 0.7)
        h = antiderivative(lambda x: pdf(nd, x), -1.0, grid)
        assert np.all(np.diff(h.ys) >= -1e-15)

    def test_non_monotone_grid_rejected(self):
        with pytest.raises(DomainError):
            antiderivative(lambda x: x, 0.0, np.array([0.0, 1.0, 0.5]))

    def test_grid_before_lower_limit_rejected(self):
        with pytest.raises(DomainError):
            antiderivative(lambda x: x, 0.5, np.array([0.0, 1.0]))


class TestGridFunction:
    def test_linear_interpolation(self):
        g = GridFunction(np.array([0.0, 1.0, 2.0]), np.array([0.0, 2.0, 4.0]), "linear")
        assert g(0.5) == pytest.approx(1.0)
        assert g(np.array([0.25, 1.5]))[1] == pytest.approx(3.0)

    def test_clamps_outside(self):
        g = GridFunction(np.array([0.0, 1.0]), np.array([1.0, 3.0]), "linear")
        assert g(-5.0) == pytest.approx(1.0)
        assert g(5.0) == pytest.approx(3.0)

    def test_rejects_bad_grid(self):
        with pytest.raises(DomainError):
            GridFunction(np.array([0.0, 0.0]), np.array([1.0, 2.0]))
        with pytest.raises(DomainError):
            GridFunction(np.array([0.0]), np.array([1.0]))
