"""Shared fixtures: family case lists and deterministic RNG."""

from __future__ import annotations

import numpy as np
import pytest

from uncorder import (
    cauchy,
    double_exponential,
    gamma_dist,
    logistic,
    lognormal,
    normal,
    student_t,
    uniform,
    weibull,
)

SEED = 20260810


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


# (label, spec, desk-scale window for interval draws)
CONTINUOUS_CASES = [
    ("normal", normal(0, 1), (-4.0, 4.0)),
    ("uniform", uniform(0, 1), (0.0, 1.0)),
    ("logistic", logistic(), (-8.0, 8.0)),
    ("double-exponential", double_exponential(), (-6.0, 6.0)),
    ("gamma-0.5", gamma_dist(0.5), (1e-3, 8.0)),
    ("gamma-2", gamma_dist(2.0), (1e-3, 10.0)),
    ("weibull-0.5", weibull(0.5), (1e-3, 10.0)),
    ("weibull-2", weibull(2.0), (1e-3, 3.0)),
    ("lognormal", lognormal(), (1e-3, 8.0)),
    ("cauchy-positive", cauchy(), (0.01, 15.0)),
    ("student-t-3", student_t(3.0), (-6.0, 6.0)),
]

# families whose cdf is log-concave on the window (upper-endpoint growth is
# guaranteed there); the subset with log-concave density also satisfies the
# lower-endpoint condition
LOGCONCAVE_CDF_CASES = [
    ("normal", normal(0, 1), (-4.0, 4.0)),
    ("logistic", logistic(), (-8.0, 8.0)),
    ("double-exponential", double_exponential(), (-6.0, 6.0)),
    ("uniform", uniform(0, 1), (0.0, 1.0)),
    ("gamma-0.5", gamma_dist(0.5), (1e-3, 8.0)),
    ("gamma-2", gamma_dist(2.0), (1e-3, 10.0)),
    ("weibull-0.5", weibull(0.5), (1e-3, 10.0)),
    ("weibull-2", weibull(2.0), (1e-3, 3.0)),
    ("lognormal", lognormal(), (1e-3, 8.0)),
]

LOGCONCAVE_DENSITY_CASES = [
    ("normal", normal(0, 1), (-4.0, 4.0)),
    ("logistic", logistic(), (-8.0, 8.0)),
    ("double-exponential", double_exponential(), (-6.0, 6.0)),
    ("uniform", uniform(0, 1), (0.0, 1.0)),
    ("gamma-2", gamma_dist(2.0), (1e-3, 10.0)),
    ("weibull-2", weibull(2.0), (1e-3, 3.0)),
]

# positive-axis b-grids for difference-density sweeps, per family
DIFF_B_GRIDS = {
    "normal": np.linspace(0.4, 3.0, 10),
    "logistic": np.linspace(0.5, 6.0, 10),
    "double-exponential": np.linspace(0.4, 5.0, 10),
    "uniform": np.linspace(0.1, 1.0, 10),
    "gamma-2": np.linspace(0.5, 8.0, 10),
    "weibull-2": np.linspace(0.3, 2.4, 10),
}


def draw_interval(rng, dist, window, min_mass=0.01):
    """Random non-degenerate interval inside the window, by quantile draws."""
    from uncorder import cdf, quantile

    plo = cdf(dist, window[0])
    phi = cdf(dist, window[1])
    for _ in range(100):
        p1, p2 = np.sort(rng.uniform(plo + 0.01, phi - 0.01, size=2))
        if p2 - p1 >= min_mass:
            a = quantile(dist, p1)
            b = quantile(dist, p2)
            if b - a > 1e-6:
                return float(a), float(b)
    raise AssertionError("failed to draw a usable interval")
