"""Grid-level log-concavity tests and the variance-monotonicity criteria.

A positive function sampled on a grid is declared log-concave when every
consecutive triple of its log-values lies on or above the chord through its
neighbours, up to a tolerance taken relative to the local log scale.  Points
where the function is not strictly positive are excluded from triples (a
cumulative integral legitimately vanishes at its base point).

``condition_in_b`` / ``condition_in_a`` test log-concavity of the triangle
integral of the rebased cdf in the upper (resp. lower) interval endpoint;
these are the exact grid-level criteria for the conditional variance to be
monotone in that endpoint.  ``variance_slope_sign_check`` tests the
equivalent pointwise sign condition F1^2 - (F(b)-F(a)) F2 >= 0.
"""

from __future__ import annotations

import numpy as np

from . import config
from .distributions import DistributionSpec, breakpoints, cdf
from .errors import DomainError
from .quadrature import GridFunction, antiderivative
from .reports import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    LOG_CONCAVE,
    NOT_LOG_CONCAVE,
    ConcavityVerdict,
    ConcavityWitness,
    MonotonicityReport,
    Witness,
)
from .truncated import rebased_antiderivatives

__all__ = [
    "is_log_concave",
    "condition_in_b",
    "condition_in_a",
    "variance_slope_sign_check",
]


def is_log_concave(h, tol: float = config.LOGCONC_TOL) -> ConcavityVerdict:
    """Second-difference log-concavity verdict for a grid function.

    ``h`` may be a :class:`GridFunction` or an ``(xs, ys)`` pair.  For each
    consecutive positive triple the chord deficit

        lam * log h(x-) + (1 - lam) * log h(x+) - log h(x0)

    (nonpositive for a concave log) is compared against
    ``tol * max(1, |log h(x0)|)``; the worst triple is reported as witness.
    """
    if isinstance(h, GridFunction):
        xs, ys = h.xs, h.ys
    else:
        xs, ys = (np.asarray(v, dtype=float) for v in h)
    if xs.ndim != 1 or xs.shape != ys.shape:
        raise DomainError("expected matching 1-d arrays")
    pos = ys > 0
    n_excluded = int((~pos).sum())
    xs_p, ys_p = xs[pos], ys[pos]
    if len(xs_p) < 3:
        return ConcavityVerdict(INCONCLUSIVE, tol, None, n_excluded)

    logs = np.log(ys_p)
    x_m, x_0, x_p = xs_p[:-2], xs_p[1:-1], xs_p[2:]
    l_m, l_0, l_p = logs[:-2], logs[1:-1], logs[2:]
    lam = (x_p - x_0) / (x_p - x_m)
    deficit = lam * l_m + (1.0 - lam) * l_p - l_0
    scale = np.maximum(1.0, np.abs(l_0))
    rel = deficit / scale

    worst = int(np.argmax(rel))
    witness = ConcavityWitness(
        float(x_m[worst]), float(x_0[worst]), float(x_p[worst]), float(deficit[worst])
    )
    verdict = NOT_LOG_CONCAVE if rel[worst] > tol else LOG_CONCAVE
    return ConcavityVerdict(verdict, tol, witness, n_excluded)


def _condition_grid(dist: DistributionSpec, lo: float, hi: float,
                    anchors: np.ndarray, n_panels: int) -> np.ndarray:
    base = np.linspace(lo, hi, n_panels + 1)
    pts = breakpoints(dist, lo, hi)
    return np.unique(np.concatenate([base, pts, anchors]))


def condition_in_b(dist: DistributionSpec, a: float, b_grid,
                   tol: float = config.LOGCONC_TOL,
                   n_panels: int = config.DEFAULT_PANELS) -> ConcavityVerdict:
    """Log-concavity in b of G(b) = double integral of F(x)-F(a) over a<=x<=y<=b."""
    b_grid = np.asarray(b_grid, dtype=float)
    if not np.all(np.diff(b_grid) > 0):
        raise DomainError("b grid must be strictly increasing")
    if b_grid[0] <= a:
        raise DomainError("b grid must lie strictly above a")
    edges = _condition_grid(dist, a, float(b_grid[-1]), b_grid, n_panels)
    _, _, f2 = rebased_antiderivatives(dist, a, edges)
    idx = np.searchsorted(edges, b_grid)
    return is_log_concave((b_grid, f2[idx]), tol)


def condition_in_a(dist: DistributionSpec, a_grid, b: float,
                   tol: float = config.LOGCONC_TOL,
                   n_panels: int = config.DEFAULT_PANELS) -> ConcavityVerdict:
    """Log-concavity in a of the mirrored double integral with F(b)-F(.).

    Computed as the double antiderivative taken from the right:
    K1(t) = int_t^b {F(b)-F(x)} dx and K2(a) = int_a^b K1, which is the
    reflected counterpart of :func:`condition_in_b`.
    """
    a_grid = np.asarray(a_grid, dtype=float)
    if not np.all(np.diff(a_grid) > 0):
        raise DomainError("a grid must be strictly increasing")
    if a_grid[-1] >= b:
        raise DomainError("a grid must lie strictly below b")
    lo = float(a_grid[0])
    edges = _condition_grid(dist, lo, float(b), a_grid, n_panels)
    fb = cdf(dist, b)
    survival = lambda x: fb - cdf(dist, x)
    a1 = antiderivative(survival, lo, edges)
    k1 = GridFunction(edges, a1.ys[-1] - a1.ys, "pchip")
    a2 = antiderivative(k1, lo, edges)
    k2 = a2.ys[-1] - a2.ys
    idx = np.searchsorted(edges, a_grid)
    return is_log_concave((a_grid, k2[idx]), tol)


def variance_slope_sign_check(dist: DistributionSpec, a: float, b_grid,
                              tol: float = config.LOGCONC_TOL,
                              n_panels: int = config.DEFAULT_PANELS) -> MonotonicityReport:
    """Sign of D(b) = F1(b)^2 - {F(b)-F(a)} F2(b) across the b grid.

    D carries the sign of the derivative of the conditional variance in b;
    the claim holds when D >= -tol relative to the local magnitude of the two
    products.  Witness records use the grid point for both interval slots and
    store D in ``var1`` and the relative margin in ``margin``.
    """
    b_grid = np.asarray(b_grid, dtype=float)
    if not np.all(np.diff(b_grid) > 0):
        raise DomainError("b grid must be strictly increasing")
    if b_grid[0] <= a:
        raise DomainError("b grid must lie strictly above a")
    edges = _condition_grid(dist, a, float(b_grid[-1]), b_grid, n_panels)
    ftilde, f1, f2 = rebased_antiderivatives(dist, a, edges)
    idx = np.searchsorted(edges, b_grid)
    sq = f1[idx] ** 2
    prod = ftilde[idx] * f2[idx]
    d = sq - prod
    scale = np.maximum(np.maximum(sq, prod), 1e-300)
    rel = d / scale

    witnesses = [
        Witness(a, float(b_grid[i]), a, float(b_grid[i]), float(d[i]), 0.0, float(rel[i]))
        for i in np.nonzero(rel < -tol)[0]
    ]
    report = MonotonicityReport(
        claim="variance-slope-sign-nonnegative",
        verdict=FAILS if witnesses else HOLDS,
        tolerance=tol,
        grid_spec=f"{len(b_grid)} points over ({a:g}, {b_grid[-1]:g}]",
        witnesses=witnesses,
        n_checked=len(b_grid),
    )
    report.d_values = d
    report.b_values = b_grid
    return report
