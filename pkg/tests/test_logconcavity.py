"""Log-concavity verdicts and the endpoint monotonicity criteria."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uncorder import (
    cauchy,
    cdf,
    condition_in_a,
    condition_in_b,
    is_log_concave,
    mixture,
    normal,
    pdf,
    tabulated_density,
    truncated_variance_formula,
    uniform,
    validate_report,
    variance_slope_sign_check,
)
from uncorder.quadrature import GridFunction, antiderivative

from conftest import LOGCONCAVE_CDF_CASES, LOGCONCAVE_DENSITY_CASES

THREE_SPIKES = mixture([
    (1 / 3, normal(0.0, 0.01)),
    (1 / 3, normal(10.0, 0.01)),
    (1 / 3, normal(10.1, 0.01)),
])


class TestIsLogConcave:
    def test_gaussian_kernel(self):
        xs = np.linspace(-3, 3, 201)
        v = is_log_concave((xs, np.exp(-xs ** 2)), tol=1e-9)
        assert v.is_log_concave

    def test_cubic_growth(self):
        bs = np.linspace(0.01, 1.0, 200)
        v = is_log_concave((bs, bs ** 3 / 6.0))
        assert v.is_log_concave

    def test_cauchy_density_tail_convex(self):
        # (log h)'' = -2(1 - 3x^2)/(1 + x^2)^2 turns positive at x = 1/sqrt(3)
        xs = np.linspace(0.1, 10.0, 400)
        v = is_log_concave((xs, 1.0 / (1.0 + xs ** 2)))
        assert v.verdict == "not-log-concave"
        assert v.witness.x_0 > 1 / math.sqrt(3.0) - 0.1

    def test_nonpositive_points_excluded(self):
        xs = np.linspace(0.0, 1.0, 50)
        ys = np.maximum(xs - 0.2, 0.0) ** 2
        v = is_log_concave((xs, ys))
        assert v.n_excluded >= 10

    def test_inconclusive_when_sparse(self):
        v = is_log_concave((np.array([0.0, 1.0, 2.0]), np.array([0.0, 1.0, 0.0])))
        assert v.verdict == "inconclusive"

    @settings(max_examples=40, deadline=None, derandomize=True)
    @given(alpha=st.floats(0.05, 20.0), beta=st.floats(-10.0, 10.0))
    def test_affine_regrid_invariance(self, alpha, beta):
        xs = np.linspace(-2, 2, 101)
        ys = np.exp(-xs ** 2 / 2.0)
        base = is_log_concave((xs, ys), tol=1e-8).verdict
        regrid = is_log_concave((alpha * xs + beta, ys), tol=1e-8).verdict
        assert base == regrid == "log-concave"

    def test_affine_regrid_preserves_failure(self):
        xs = np.linspace(0.1, 10.0, 400)
        ys = 1.0 / (1.0 + xs ** 2)
        flipped = is_log_concave((np.sort(-2.0 * xs), ys[::-1]))
        assert flipped.verdict == "not-log-concave"


class TestConditionInB:
    def test_uniform_cubic(self):
        v = condition_in_b(uniform(0, 1), 0.0, np.linspace(0.05, 1.0, 60))
        assert v.is_log_concave

    def test_normal(self):
        v = condition_in_b(normal(0, 1), -3.0, np.linspace(-2.9, 3.0, 80))
        assert v.is_log_concave

    def test_cauchy_full_line_fails_with_witness(self):
        v = condition_in_b(cauchy(), -50.0, np.linspace(-50, 50, 202)[1:])
        assert v.verdict == "not-log-concave"
        assert v.witness is not None
        assert v.witness.second_diff > 0

    def test_json_shape(self):
        v = condition_in_b(uniform(0, 1), 0.0, np.linspace(0.1, 1.0, 30))
        validate_report(v.to_dict())


class TestConditionInA:
    def test_uniform_mirrored_cubic(self):
        a_grid = np.linspace(0.0, 0.95, 60)
        v = condition_in_a(uniform(0, 1), a_grid, 1.0)
        assert v.is_log_concave

    def test_normal(self):
        v = condition_in_a(normal(0, 1), np.linspace(-3.0, 2.9, 80), 3.0)
        assert v.is_log_concave

    def test_heavy_tail_tabulated_fails(self):
        xs = np.linspace(-50.0, 50.0, 4001)
        d = tabulated_density(xs, 1.0 / (1.0 + xs ** 2))
        v = condition_in_a(d, np.linspace(-49.9, 49.0, 120), 50.0)
        assert v.verdict == "not-log-concave"

    def test_uniform_values_match_closed_form(self):
        # mirrored triangle integral for the uniform: (1 - a)^3 / 6
        a_grid = np.linspace(0.0, 0.9, 10)
        edges = np.unique(np.concatenate([a_grid, np.linspace(0, 1, 2049)]))
        fb = cdf(uniform(0, 1), 1.0)
        a1 = antiderivative(lambda x: fb - cdf(uniform(0, 1), x), 0.0, edges)
        k1 = GridFunction(edges, a1.ys[-1] - a1.ys, "pchip")
        a2 = antiderivative(k1, 0.0, edges)
        k2 = a2.ys[-1] - a2.ys
        idx = np.searchsorted(edges, a_grid)
        np.testing.assert_allclose(k2[idx], (1 - a_grid) ** 3 / 6.0, atol=1e-9)


class TestSlopeSignCheck:
    def test_uniform_quartic_positive(self):
        b_grid = np.linspace(0.1, 1.0, 40)
        rep = variance_slope_sign_check(uniform(0, 1), 0.0, b_grid)
        assert rep.holds
        np.testing.assert_allclose(rep.d_values, b_grid ** 4 / 12.0, atol=1e-9)

    def test_normal_holds(self):
        rep = variance_slope_sign_check(normal(0, 1), -4.0, np.linspace(-3.9, 4.0, 60))
        assert rep.holds

    def test_three_spike_negative_near_third_spike(self):
        b_grid = np.unique(np.concatenate([
            np.linspace(0.5, 12.0, 40), [10.05, 10.08, 10.12],
        ]))
        rep = variance_slope_sign_check(THREE_SPIKES, -1.0, b_grid)
        assert not rep.holds
        bad = [w.b1 for w in rep.witnesses]
        assert any(10.0 < b < 10.2 for b in bad)

    @pytest.mark.parametrize("label,dist,window", LOGCONCAVE_CDF_CASES)
    def test_logconcave_cdf_families_hold(self, label, dist, window):
        lo, hi = window
        rep = variance_slope_sign_check(dist, lo, np.linspace(lo, hi, 81)[1:])
        assert rep.holds


class TestSignPatternEquivalence:
    """Sign of D(b) must match the direction of the variance in b."""

    def _check(self, dist, a, b_grid, tol=1e-6):
        rep = variance_slope_sign_check(dist, a, b_grid, tol=tol)
        variances = np.array([
            truncated_variance_formula(dist, a, float(b)).variance for b in b_grid
        ])
        d = rep.d_values
        scale = np.maximum(np.abs(d).max(), 1e-30)
        for j in range(len(b_grid) - 1):
            dv = variances[j + 1] - variances[j]
            if d[j] > tol * scale and d[j + 1] > tol * scale:
                assert dv >= -1e-6
            if d[j] < -tol * scale and d[j + 1] < -tol * scale:
                assert dv <= 1e-6

    def test_normal(self):
        self._check(normal(0, 1), -4.0, np.linspace(-3.5, 4.0, 25))

    def test_cauchy_full_line(self):
        self._check(cauchy(), -50.0, np.linspace(-45.0, 50.0, 25))

    def test_three_spikes(self):
        self._check(THREE_SPIKES, -1.0, np.linspace(9.8, 11.0, 25))


class TestLemmaConformance:
    @pytest.mark.parametrize("label,dist,window", LOGCONCAVE_DENSITY_CASES)
    def test_integrated_density_is_log_concave(self, label, dist, window):
        # cumulative integral of a log-concave density stays log-concave
        lo, hi = window
        grid = np.linspace(lo, hi, 257)
        h = antiderivative(lambda x: pdf(dist, x), lo, grid)
        v = is_log_concave((grid[1:], h.ys[1:]), tol=1e-7)
        assert v.is_log_concave

    @pytest.mark.parametrize("label,dist,window", LOGCONCAVE_CDF_CASES)
    def test_rebased_cdf_stays_log_concave(self, label, dist, window):
        # F(x) - F(x0) keeps log-concavity above x0 when F is log-concave
        lo, hi = window
        for frac in (0.1, 0.4):
            x0 = lo + frac * (hi - lo)
            xs = np.linspace(x0, hi, 200)[1:]
            v = is_log_concave((xs, cdf(dist, xs) - cdf(dist, x0)), tol=1e-7)
            assert v.is_log_concave, (label, x0, v.witness)
