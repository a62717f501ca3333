"""Truncated moments: oracle route, antiderivative route, monotonicity sweeps."""

import math

import numpy as np
import pytest

from uncorder import (
    cauchy,
    geometric,
    mixture,
    monotonicity_sweep,
    normal,
    truncated_moments_oracle,
    truncated_variance_formula,
    uniform,
    validate_report,
)
from uncorder.errors import DegenerateIntervalError, DomainError

from conftest import CONTINUOUS_CASES, LOGCONCAVE_DENSITY_CASES, draw_interval

# truncated standard normal on (-1, 1): 1 - 2 phi(1) / (2 Phi(1) - 1)
TRUNC_NORMAL_VAR = 0.29112509477279314
# closed-form Cauchy integrals: mass = atan(b)/pi, E X = ln(1+b^2)/(2 atan b),
# E X^2 = (b - atan b)/atan b
CAUCHY_VAR_01 = 0.07851927251627969
CAUCHY_VAR_02 = 0.2781470013145405

THREE_SPIKES = mixture([
    (1 / 3, normal(0.0, 0.01)),
    (1 / 3, normal(10.0, 0.01)),
    (1 / 3, normal(10.1, 0.01)),
])


class TestOracle:
    @pytest.mark.parametrize("b", [0.2, 0.5, 1.0])
    def test_uniform_subinterval(self, b):
        m = truncated_moments_oracle(uniform(0, 1), (0.0, b))
        assert m.variance == pytest.approx(b * b / 12.0, abs=1e-10)
        assert m.mass == pytest.approx(b, abs=1e-12)

    def test_truncated_normal(self):
        m = truncated_moments_oracle(normal(0, 1), (-1.0, 1.0))
        assert m.variance == pytest.approx(TRUNC_NORMAL_VAR, abs=1e-5)
        assert m.mean == pytest.approx(0.0, abs=1e-9)

    def test_geometric_window(self):
        # brute force over k in {0,1,2} with weights 4/7, 2/7, 1/7
        m = truncated_moments_oracle(geometric(0.5), (0, 2))
        assert m.variance == pytest.approx(26 / 49, abs=1e-12)
        assert m.mass == pytest.approx(7 / 8, abs=1e-12)

    def test_degenerate_interval(self):
        with pytest.raises(DegenerateIntervalError):
            truncated_moments_oracle(normal(0, 1), (20.0, 20.5))

    def test_infinite_tail_clipped(self):
        m = truncated_moments_oracle(normal(0, 1), (-math.inf, math.inf))
        assert m.mass == pytest.approx(1.0, abs=1e-12)
        assert m.variance == pytest.approx(1.0, abs=1e-7)


class TestFormulaRoute:
    @pytest.mark.parametrize("b", [0.25, 0.5, 1.0])
    def test_uniform(self, b):
        m = truncated_variance_formula(uniform(0, 1), 0.0, b)
        assert m.variance == pytest.approx(b * b / 12.0, abs=1e-10)

    def test_normal_agrees_with_oracle(self):
        m = truncated_variance_formula(normal(0, 1), -1.0, 1.0)
        assert m.variance == pytest.approx(TRUNC_NORMAL_VAR, abs=1e-5)

    def test_cauchy_closed_form(self):
        m = truncated_variance_formula(cauchy(), 0.0, 2.0)
        assert m.variance == pytest.approx(CAUCHY_VAR_02, abs=1e-3)
        assert m.mean == pytest.approx(math.log(5.0) / (2 * math.atan(2.0)), abs=1e-8)

    def test_discrete_rejected(self):
        with pytest.raises(DomainError):
            truncated_variance_formula(geometric(0.5), 0.0, 2.0)

    @pytest.mark.parametrize("label,dist,window", CONTINUOUS_CASES)
    def test_route_agreement_sampled(self, label, dist, window, rng):
        for _ in range(4):
            a, b = draw_interval(rng, dist, window)
            direct = truncated_moments_oracle(dist, (a, b))
            formula = truncated_variance_formula(dist, a, b)
            assert formula.variance == pytest.approx(direct.variance, abs=1e-6)
            assert formula.mean == pytest.approx(direct.mean, abs=1e-6)

    @pytest.mark.parametrize("label,dist,window", CONTINUOUS_CASES[:6])
    def test_width_bound(self, label, dist, window, rng):
        # degenerate width: variance below (b - a)^2 always
        for _ in range(3):
            a, b = draw_interval(rng, dist, window, min_mass=0.002)
            m = truncated_moments_oracle(dist, (a, b))
            assert m.variance < (b - a) ** 2


class TestSweep:
    def test_normal_holds(self):
        rep = monotonicity_sweep(normal(0, 1), (-4, 4), 21, 21, tol=1e-7)
        assert rep.holds
        payload = rep.to_dict()
        validate_report(payload)

    def test_cauchy_positive_axis_b_direction(self):
        # growth in the upper endpoint is guaranteed by the log-concave cdf;
        # the lower-endpoint direction genuinely fails for the Cauchy (see the
        # slope-sign check), so only b-direction witnesses are forbidden here
        rep = monotonicity_sweep(cauchy(), (0.01, 50.0), 21, 21, tol=1e-7)
        b_violations = [w for w in rep.witnesses if w.a1 == w.a2]
        assert not b_violations

    def test_cauchy_full_line_fails(self):
        rep = monotonicity_sweep(cauchy(), (-50.0, 50.0), 21, 21, tol=1e-7)
        assert not rep.holds
        assert rep.witnesses

    def test_three_spike_counterexample(self):
        rep = monotonicity_sweep(THREE_SPIKES, (-1.0, 12.0), 21, 21, tol=1e-7)
        assert not rep.holds
        # the drop crosses from the two-spike variance (~25) toward the
        # three-spike value (~22.45); brute force over {0, 10, 10.1}
        worst = min(rep.witnesses, key=lambda w: w.margin)
        assert worst.margin < -1e-3
        before = truncated_moments_oracle(THREE_SPIKES, (-1.0, 10.05))
        after = truncated_moments_oracle(THREE_SPIKES, (-1.0, 11.0))
        assert before.variance == pytest.approx(25.0, abs=1e-2)
        assert after.variance == pytest.approx(22.447, abs=1e-2)
        assert after.variance < before.variance - 1e-3

    @pytest.mark.parametrize("label,dist,window", LOGCONCAVE_DENSITY_CASES)
    def test_logconcave_density_families_hold(self, label, dist, window):
        rep = monotonicity_sweep(dist, window, 15, 15, tol=1e-7)
        assert rep.holds, [w.to_dict() for w in rep.witnesses[:3]]

    def test_report_shape(self):
        rep = monotonicity_sweep(uniform(0, 1), (0, 1), 5, 5, tol=1e-9)
        d = rep.to_dict()
        validate_report(d)
        assert d["n_violations"] == 0
        assert rep.details.variances.shape == (5, 5)

    def test_uniform_subintervals_exact(self):
        rep = monotonicity_sweep(uniform(0, 1), (0, 1), 9, 9, tol=1e-10)
        det = rep.details
        for i, a in enumerate(det.a_values):
            for j, b in enumerate(det.b_values):
                if a < b:
                    expected = (b - a) ** 2 / 12.0
                    assert det.variances[i, j] == pytest.approx(expected, abs=1e-10)

    def test_rejects_infinite_window(self):
        with pytest.raises(DomainError):
            monotonicity_sweep(normal(0, 1), (-math.inf, 0.0))

    def test_uniform_spacing_switch(self):
        rep = monotonicity_sweep(normal(0, 1), (-3, 3), 9, 9, spacing="uniform")
        assert rep.holds
        np.testing.assert_allclose(rep.details.a_values, np.linspace(-3, 3, 9))


def test_max_evals_env_cap(monkeypatch):
    from uncorder import config
    from uncorder.quadrature import integrate

    monkeypatch.setenv(config.MAX_EVALS_ENV, "150")
    assert config.max_evals() == 150
    needle = lambda x: np.exp(-((x - 0.338) ** 2) * 1e14)
    r = integrate(needle, 0.0, 1.0, tol=1e-16)
    assert r.abs_error_estimate > 1e-16 or abs(r.value) < 1e-12
    monkeypatch.delenv(config.MAX_EVALS_ENV)
    assert config.max_evals() == config.DEFAULT_MAX_EVALS
