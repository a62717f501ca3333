"""Distribution evaluators, quantiles, loaders, and the mini-language."""

import math

import numpy as np
import pytest

from uncorder import (
    cauchy,
    cdf,
    discrete_table,
    from_string,
    geometric,
    load_pmf_table,
    load_tabulated_density,
    mixture,
    normal,
    pdf,
    pmf,
    poisson,
    quantile,
    support,
    tabulated_density,
    uniform,
)
from uncorder.distributions import Interval, folded_abs, truncated
from uncorder.errors import DomainError, KindMismatchError, ParseError
from uncorder.quadrature import integrate

from conftest import CONTINUOUS_CASES


class TestPdf:
    def test_standard_normal_at_zero(self):
        assert pdf(normal(0, 1), 0.0) == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-12)

    def test_uniform_density(self):
        assert pdf(uniform(0, 1), 0.5) == pytest.approx(1.0)

    def test_cauchy_at_zero(self):
        assert pdf(cauchy(), 0.0) == pytest.approx(1 / math.pi, abs=1e-12)

    def test_discrete_rejects_density(self):
        with pytest.raises(KindMismatchError):
            pdf(geometric(0.5), 1.0)


class TestCdf:
    def test_cauchy_median(self):
        assert cdf(cauchy(), 0.0) == pytest.approx(0.5, abs=1e-14)

    def test_uniform(self):
        assert cdf(uniform(0, 1), 0.25) == pytest.approx(0.25, abs=1e-14)

    def test_geometric_step(self):
        # brute-force sum p(0)+p(1) = 0.5 + 0.25
        assert cdf(geometric(0.5), 1.0) == pytest.approx(0.75, abs=1e-14)
        assert cdf(geometric(0.5), 1.5) == pytest.approx(0.75, abs=1e-14)

    @pytest.mark.parametrize("label,dist,window", CONTINUOUS_CASES)
    def test_monotone_on_grid(self, label, dist, window):
        xs = np.linspace(window[0], window[1], 400)
        vals = cdf(dist, xs)
        assert np.all(np.diff(vals) >= -1e-15)
        assert np.all((vals >= 0) & (vals <= 1))


class TestQuantile:
    def test_uniform_midpoint(self):
        assert quantile(uniform(0, 2), 0.5) == pytest.approx(1.0, abs=1e-9)

    def test_normal_table_point(self):
        # independent oracle: scipy.stats.norm.ppf(0.841345) = 1.000001049431045
        assert quantile(normal(0, 1), 0.841345) == pytest.approx(1.000001049431045, abs=1e-7)

    def test_geometric_step_inversion(self):
        # F(0) = 0.5 < 0.6 <= F(1) = 0.75
        assert quantile(geometric(0.5), 0.6) == 1.0

    def test_domain_error(self):
        with pytest.raises(DomainError):
            quantile(normal(0, 1), 0.0)
        with pytest.raises(DomainError):
            quantile(normal(0, 1), 1.5)

    @pytest.mark.parametrize("label,dist,window", CONTINUOUS_CASES)
    def test_round_trips(self, label, dist, window, rng):
        xs = rng.uniform(window[0], window[1], size=1000)
        ps = cdf(dist, xs)
        ok = (ps > 1e-9) & (ps < 1 - 1e-9)
        q = quantile(dist, ps[ok])
        assert np.all(q <= xs[ok] + 1e-8)
        ps2 = rng.uniform(0.001, 0.999, size=1000)
        x2 = quantile(dist, ps2)
        assert np.all(cdf(dist, x2) >= ps2 - 1e-12)


@pytest.mark.parametrize("label,dist,window", CONTINUOUS_CASES)
def test_pdf_integrates_to_cdf_difference(label, dist, window, rng):
    a, b = sorted(rng.uniform(window[0], window[1], size=2))
    if b - a < 1e-3:
        b = a + 1e-3
    r = integrate(lambda x: pdf(dist, x), a, b, tol=1e-10)
    assert abs(r.value - (cdf(dist, b) - cdf(dist, a))) < 1e-8


class TestInterval:
    def test_orders_endpoints(self):
        with pytest.raises(DomainError):
            Interval(1.0, 1.0)
        iv = Interval(-math.inf, 2.0)
        assert not iv.finite

    def test_nan_rejected(self):
        with pytest.raises(DomainError):
            Interval(math.nan, 1.0)


class TestValidation:
    def test_mixture_weights_must_sum_to_one(self):
        with pytest.raises(DomainError):
            mixture([(0.5, normal(0, 1)), (0.4, normal(1, 1))])

    def test_mixture_weights_nonnegative(self):
        with pytest.raises(DomainError):
            mixture([(1.5, normal(0, 1)), (-0.5, normal(1, 1))])

    def test_tabulated_renormalizes(self):
        d = tabulated_density([0.0, 1.0, 2.0], [1.0, 3.0, 1.0])
        r = integrate(lambda x: pdf(d, x), 0.0, 2.0, tol=1e-12)
        assert abs(r.value - 1.0) < 1e-9

    def test_pmf_sums_validated(self):
        with pytest.raises(Exception):
            discrete_table([0, 1], [0.6, 0.6])

    def test_sigma_positive(self):
        with pytest.raises(DomainError):
            normal(0, 0)


class TestWrappers:
    def test_truncated_delegates_quantile(self):
        t = truncated(normal(0, 1), -1.0, 1.0)
        assert support(t) == (-1.0, 1.0)
        assert quantile(t, 0.5) == pytest.approx(0.0, abs=1e-9)
        assert cdf(t, 1.0) == pytest.approx(1.0)
        assert cdf(t, -1.0) == pytest.approx(0.0)

    def test_folded_abs_median(self):
        f = folded_abs(cauchy(), 1.0)
        # |X| given |X| < 1 has cdf arctan(x)/arctan(1)
        assert cdf(f, 0.5) == pytest.approx(math.atan(0.5) / math.atan(1.0), abs=1e-12)
        r = integrate(lambda x: pdf(f, x), 0.0, 1.0, tol=1e-11, points=[0.0])
        assert abs(r.value - 1.0) < 1e-9


class TestTextInterfaces:
    def test_mini_language(self):
        d = from_string("normal:0,1")
        assert d.family == "normal" and d.params == (0.0, 1.0)
        assert from_string("cauchy").family == "cauchy"
        assert from_string("student-t:3").params == (3.0,)
        with pytest.raises(ParseError):
            from_string("nosuch:1")
        with pytest.raises(ParseError):
            from_string("normal:0")
        with pytest.raises(ParseError):
            from_string("cauchy:3")

    def test_density_csv_roundtrip(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("x,pdf\n0,0.5\n1,1.5\n2,0.5\n")
        d = load_tabulated_density(p)
        assert d.kind == "tabulated-density"
        assert pdf(d, 1.0) == pytest.approx(1.5 / 2.0)  # renormalized by 2

    def test_density_csv_errors_carry_line_numbers(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("x,pdf\n0,0.5\n0,1.0\n")
        with pytest.raises(ParseError, match="line 3"):
            load_tabulated_density(p)
        p.write_text("x,pdf\n0,oops\n")
        with pytest.raises(ParseError, match="line 2"):
            load_tabulated_density(p)
        p.write_text("wrong,header\n0,1\n")
        with pytest.raises(ParseError, match="line 1"):
            load_tabulated_density(p)

    def test_pmf_csv(self, tmp_path):
        p = tmp_path / "p.csv"
        p.write_text("k,pmf\n0,0.5\n1,0.25\n2,0.25\n")
        d = load_pmf_table(p)
        assert pmf(d, 1) == pytest.approx(0.25)
        p.write_text("k,pmf\n0.5,1.0\n")
        with pytest.raises(ParseError, match="line 2"):
            load_pmf_table(p)


def test_poisson_pmf_matches_formula():
    lam = 4.0
    d = poisson(lam)
    for k in (0, 1, 5, 10):
        expected = math.exp(-lam) * lam ** k / math.factorial(k)
        assert pmf(d, k) == pytest.approx(expected, rel=1e-12)
