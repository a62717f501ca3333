"""Conditional (truncated) mean and variance on intervals, two ways.

``truncated_moments_oracle`` integrates x dF and x^2 dF directly (or sums a
pmf), and serves as the brute-force reference.  ``truncated_variance_formula``
builds the first and second cumulative antiderivatives F1, F2 of the rebased
cdf F(x) - F(a) on [a, b] and evaluates

    mean = b - F1(b) / m,    variance = 2 F2(b) / m - (F1(b) / m)^2

with m = F(b) - F(a).  The two routes must agree; their disagreement is a
bug, not a tolerance question, which is why both are kept.

``monotonicity_sweep`` evaluates the conditional variance on an (a_i, b_j)
grid of sub-intervals and reports every pair of nested intervals whose
variances are ordered the wrong way by more than the tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import config
from .distributions import (
    DISCRETE,
    DistributionSpec,
    Interval,
    as_interval,
    breakpoints,
    cdf,
    pdf,
    pmf,
    quantile,
    support,
)
from .errors import DegenerateIntervalError, DomainError
from .quadrature import antiderivative, integrate
from .reports import FAILS, HOLDS, MonotonicityReport, TruncatedMoments, Witness

__all__ = [
    "truncated_moments_oracle",
    "truncated_variance_formula",
    "monotonicity_sweep",
    "rebased_antiderivatives",
    "sweep_grid",
    "SweepDetails",
]


def _clip_endpoint(dist: DistributionSpec, x: float, upper: bool) -> float:
    if math.isfinite(x):
        return x
    eps = config.TAIL_EPS
    return quantile(dist, 1.0 - eps if upper else eps)


def _integer_window(dist: DistributionSpec, iv: Interval) -> np.ndarray:
    lo = iv.lo if math.isfinite(iv.lo) else support(dist)[0]
    if math.isfinite(iv.hi):
        hi = iv.hi
    else:
        hi = quantile(dist, 1.0 - 1e-15) + 2.0
    ks = np.arange(math.ceil(lo), math.floor(hi) + 1, dtype=np.int64)
    if dist.family == "table":
        ks = ks[np.isin(ks, dist.xs)]
    return ks


def truncated_moments_oracle(dist: DistributionSpec, iv,
                             tol: float = config.DEFAULT_QUAD_TOL,
                             mass_floor: float = config.MASS_FLOOR) -> TruncatedMoments:
    """Direct-quadrature (or direct-summation) conditional moments on iv."""
    iv = as_interval(iv)
    if dist.kind == DISCRETE:
        ks = _integer_window(dist, iv)
        ws = pmf(dist, ks) if len(ks) else np.array([])
        mass = float(ws.sum())
        if mass < mass_floor:
            raise DegenerateIntervalError(
                f"interval ({iv.lo}, {iv.hi}) carries mass {mass:.3e}")
        mean = float((ks * ws).sum() / mass)
        second = float((ks.astype(float) ** 2 * ws).sum() / mass)
        return TruncatedMoments(mass, mean, max(second - mean * mean, 0.0), "direct")

    mass = float(cdf(dist, iv.hi) - cdf(dist, iv.lo))
    if mass < mass_floor:
        raise DegenerateIntervalError(
            f"interval ({iv.lo}, {iv.hi}) carries mass {mass:.3e}")
    lo = _clip_endpoint(dist, iv.lo, upper=False)
    hi = _clip_endpoint(dist, iv.hi, upper=True)
    pts = breakpoints(dist, lo, hi)
    tol_eff = tol * min(1.0, mass)
    if mass < 1e-3:
        # the cdf difference carries absolute rounding noise of order 1e-16,
        # which the moment ratios amplify by E[X^2]/mass; re-measure the mass
        # from the density itself to restore relative precision
        mass = integrate(lambda x: pdf(dist, x), lo, hi,
                         tol=tol_eff, points=pts).value
        if mass < mass_floor:
            raise DegenerateIntervalError(
                f"interval ({iv.lo}, {iv.hi}) carries mass {mass:.3e}")
    m1 = integrate(lambda x: x * pdf(dist, x), lo, hi, tol=tol_eff, points=pts).value
    m2 = integrate(lambda x: x * x * pdf(dist, x), lo, hi, tol=tol_eff, points=pts).value
    mean = m1 / mass
    var = max(m2 / mass - mean * mean, 0.0)
    return TruncatedMoments(float(mass), mean, var, "direct")


def rebased_antiderivatives(dist: DistributionSpec, a: float, grid: np.ndarray,
                            tol: float = config.PANEL_TOL):
    """F(x)-F(a), F1 and F2 evaluated on ``grid`` (which must start at a).

    F1 is the cumulative integral of the rebased cdf from a; F2 the cumulative
    integral of F1 (computed exactly from the monotone interpolant of F1).
    """
    grid = np.asarray(grid, dtype=float)
    fa = cdf(dist, a)
    ftilde = cdf(dist, grid) - fa
    rebased = lambda x: cdf(dist, x) - fa
    f1 = antiderivative(rebased, a, grid, tol=tol)
    f2 = antiderivative(f1, a, grid, tol=tol)
    return ftilde, f1.ys, f2.ys


def _formula_grid(dist: DistributionSpec, a: float, b: float, n_panels: int) -> np.ndarray:
    base = np.linspace(a, b, n_panels + 1)
    pts = breakpoints(dist, a, b)
    return np.unique(np.concatenate([base, pts]))


def truncated_variance_formula(dist: DistributionSpec, a: float, b: float,
                               n_panels: int = config.DEFAULT_PANELS,
                               mass_floor: float = config.MASS_FLOOR) -> TruncatedMoments:
    """Conditional moments on (a, b) through the antiderivative identity."""
    if dist.kind == DISCRETE:
        raise DomainError("the antiderivative formula applies to continuous kinds")
    iv = Interval(a, b)
    mass = float(cdf(dist, iv.hi) - cdf(dist, iv.lo))
    if mass < mass_floor:
        raise DegenerateIntervalError(
            f"interval ({a}, {b}) carries mass {mass:.3e}")
    a_eff = _clip_endpoint(dist, iv.lo, upper=False)
    b_eff = _clip_endpoint(dist, iv.hi, upper=True)
    grid = _formula_grid(dist, a_eff, b_eff, n_panels)
    ftilde, f1, f2 = rebased_antiderivatives(dist, a_eff, grid)
    m = float(ftilde[-1])
    mean = b_eff - f1[-1] / m
    var = 2.0 * f2[-1] / m - (f1[-1] / m) ** 2
    return TruncatedMoments(mass, float(mean), float(max(var, 0.0)), "antiderivative")


# ---------------------------------------------------------------------------
# monotonicity sweeps


@dataclass
class SweepDetails:
    """Raw sweep grid for plotting and post-processing."""

    a_values: np.ndarray
    b_values: np.ndarray
    variances: np.ndarray  # shape (n_a, n_b); NaN where skipped/invalid


def sweep_grid(dist: DistributionSpec, lo: float, hi: float, n: int,
               spacing: str = "quantile") -> np.ndarray:
    """n points spanning [lo, hi], uniform in probability or in x."""
    if n < 2:
        raise DomainError("sweep grids need at least 2 points")
    if spacing == "uniform":
        return np.linspace(lo, hi, n)
    if spacing != "quantile":
        raise DomainError(f"unknown spacing {spacing!r}")
    plo = float(cdf(dist, lo))
    phi = float(cdf(dist, hi))
    eps = 1e-12
    ps = np.linspace(max(plo, eps), min(phi, 1 - eps), n)
    pts = np.empty(n)
    pts[0], pts[-1] = lo, hi
    if n > 2:
        pts[1:-1] = quantile(dist, ps[1:-1])
    pts = np.unique(np.clip(pts, lo, hi))
    if len(pts) < n:
        # cdf plateaus collapsed points; refill with x-uniform ones
        pts = np.unique(np.concatenate([pts, np.linspace(lo, hi, n)]))[:n]
        pts[0], pts[-1] = lo, hi
        pts = np.unique(pts)
    return pts


def _cumulative_moments(dist: DistributionSpec, edges: np.ndarray,
                        tol: float = config.PANEL_TOL):
    """cdf, int x f and int x^2 f accumulated along ``edges``."""
    m0 = cdf(dist, edges)
    f1 = antiderivative(lambda x: x * pdf(dist, x), edges[0], edges, tol=tol)
    f2 = antiderivative(lambda x: x * x * pdf(dist, x), edges[0], edges, tol=tol)
    return m0, f1.ys, f2.ys


def monotonicity_sweep(dist: DistributionSpec, window, n_a: int = 21, n_b: int = 21,
                       tol: float = config.SWEEP_TOL, spacing: str = "quantile",
                       mass_floor: float = config.MASS_FLOOR) -> MonotonicityReport:
    """Check that var(X | a < X < b) grows with the interval, on a grid.

    Variance must be nondecreasing in b at fixed a and nonincreasing in a at
    fixed b, up to -tol.  Every violating adjacent pair becomes a witness.
    Grid cells with conditioning mass below ``mass_floor`` are skipped and
    counted.  The returned report carries the raw grid in ``details``.
    """
    window = as_interval(window)
    if not window.finite:
        raise DomainError("sweep window must be finite")
    if n_a < 2 or n_b < 2:
        raise DomainError("sweep needs n_a, n_b >= 2")

    a_vals = sweep_grid(dist, window.lo, window.hi, n_a, spacing)
    b_vals = sweep_grid(dist, window.lo, window.hi, n_b, spacing)
    pts = breakpoints(dist, window.lo, window.hi)
    fill = np.linspace(window.lo, window.hi, 257)
    edges = np.unique(np.concatenate([a_vals, b_vals, pts, fill]))
    m0, m1, m2 = _cumulative_moments(dist, edges)

    ia = np.searchsorted(edges, a_vals)
    ib = np.searchsorted(edges, b_vals)

    na, nb = len(a_vals), len(b_vals)
    var = np.full((na, nb), np.nan)
    n_skipped = 0
    for i in range(na):
        for j in range(nb):
            if a_vals[i] >= b_vals[j]:
                continue
            mass = m0[ib[j]] - m0[ia[i]]
            if mass < mass_floor:
                n_skipped += 1
                continue
            mean = (m1[ib[j]] - m1[ia[i]]) / mass
            second = (m2[ib[j]] - m2[ia[i]]) / mass
            var[i, j] = max(second - mean * mean, 0.0)

    witnesses: list[Witness] = []
    n_checked = 0
    # nondecreasing in b at fixed a
    for i in range(na):
        cols = [j for j in range(nb) if not np.isnan(var[i, j])]
        for j0, j1 in zip(cols[:-1], cols[1:]):
            n_checked += 1
            margin = var[i, j1] - var[i, j0]
            if margin < -tol:
                witnesses.append(Witness(a_vals[i], b_vals[j0], a_vals[i], b_vals[j1],
                                         float(var[i, j0]), float(var[i, j1]),
                                         float(margin)))
    # nonincreasing in a at fixed b
    for j in range(nb):
        rows = [i for i in range(na) if not np.isnan(var[i, j])]
        for i0, i1 in zip(rows[:-1], rows[1:]):
            n_checked += 1
            margin = var[i0, j] - var[i1, j]
            if margin < -tol:
                witnesses.append(Witness(a_vals[i0], b_vals[j], a_vals[i1], b_vals[j],
                                         float(var[i0, j]), float(var[i1, j]),
                                         float(margin)))

    report = MonotonicityReport(
        claim="conditional-variance-partially-monotonic",
        verdict=FAILS if witnesses else HOLDS,
        tolerance=tol,
        grid_spec=f"{spacing} {na}x{nb} over [{window.lo:g}, {window.hi:g}]",
        witnesses=witnesses,
        n_skipped=n_skipped,
        n_checked=n_checked,
    )
    report.details = SweepDetails(a_vals, b_vals, var)
    return report
