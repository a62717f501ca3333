"""Stochastic-order verifiers: dispersion, likelihood ratio, stochastic, TP2.

All verdicts are claims about the probe grid, never about the continuum;
the grid is recorded on the verdict.  A check fails only when a margin drops
below -tol, so quadrature noise of order tol cannot produce a false "fails".
"""

from __future__ import annotations

import numpy as np

from . import config
from .distributions import DistributionSpec, cdf, quantile
from .errors import DisjointSupportError, DomainError
from .quadrature import GridFunction
from .reports import FAILS, HOLDS, OrderVerdict

__all__ = [
    "dispersion_order",
    "likelihood_ratio_order",
    "tp2_check",
    "stochastic_order",
]

_TINY = 1e-300


def dispersion_order(dist_f: DistributionSpec, dist_g: DistributionSpec,
                     alphas, tol: float = config.ORDER_TOL) -> OrderVerdict:
    """Does F spread at least as much as G between every quantile pair?

    Holds iff F^{-1}(beta) - F^{-1}(alpha) >= G^{-1}(beta) - G^{-1}(alpha) - tol
    for all alpha < beta drawn from ``alphas``.
    """
    alphas = np.asarray(alphas, dtype=float)
    if alphas.ndim != 1 or len(alphas) < 2:
        raise DomainError("need at least two probe probabilities")
    if not np.all(np.diff(alphas) > 0):
        raise DomainError("probe probabilities must be strictly increasing")
    if alphas[0] <= 0 or alphas[-1] >= 1:
        raise DomainError("probe probabilities must lie inside (0, 1)")
    qf = quantile(dist_f, alphas)
    qg = quantile(dist_g, alphas)
    span_f = qf[None, :] - qf[:, None]
    span_g = qg[None, :] - qg[:, None]
    margins = span_f - span_g
    iu = np.triu_indices(len(alphas), k=1)
    margins = margins[iu]
    worst = int(np.argmin(margins))
    witness = None
    verdict = HOLDS
    if margins[worst] < -tol:
        i, j = iu[0][worst], iu[1][worst]
        verdict = FAILS
        witness = {
            "alpha": float(alphas[i]), "beta": float(alphas[j]),
            "f_span": float(qf[j] - qf[i]), "g_span": float(qg[j] - qg[i]),
            "margin": float(margins[worst]),
        }
    return OrderVerdict("dispersion", verdict, tol,
                        f"{len(alphas)} probe probabilities", witness)


def likelihood_ratio_order(f_num: GridFunction, f_den: GridFunction,
                           tol: float = config.ORDER_TOL) -> OrderVerdict:
    """Is f_num / f_den nondecreasing along the (shared) grid?

    Where the denominator vanishes but the numerator does not, the ratio is
    taken as +inf (the numerator's support may extend beyond the
    denominator's); positions where both vanish are skipped.
    """
    if len(f_num.xs) != len(f_den.xs) or not np.allclose(f_num.xs, f_den.xs, atol=1e-12):
        raise DomainError("likelihood ratio needs a shared grid")
    num, den = f_num.ys, f_den.ys
    if not np.any((num > _TINY) & (den > _TINY)):
        raise DisjointSupportError("numerator and denominator share no support")
    ratio = np.full(len(num), np.nan)
    both = den > _TINY
    ratio[both] = num[both] / den[both]
    ratio[~both & (num > _TINY)] = np.inf

    xs = f_num.xs
    defined = ~np.isnan(ratio)
    r = ratio[defined]
    x = xs[defined]
    witness = None
    verdict = HOLDS
    for i in range(len(r) - 1):
        prev, nxt = r[i], r[i + 1]
        if np.isinf(prev) and np.isfinite(nxt):
            verdict = FAILS
            witness = {"x_prev": float(x[i]), "x_next": float(x[i + 1]),
                       "ratio_prev": None, "ratio_next": float(nxt),
                       "margin": -np.inf}
            break
        if np.isinf(prev) or np.isinf(nxt):
            continue
        margin = nxt - prev
        if margin < -tol * max(1.0, abs(prev), abs(nxt)):
            verdict = FAILS
            witness = {"x_prev": float(x[i]), "x_next": float(x[i + 1]),
                       "ratio_prev": float(prev), "ratio_next": float(nxt),
                       "margin": float(margin)}
            break
    return OrderVerdict("likelihood-ratio", verdict, tol,
                        f"{len(xs)} shared grid points", witness)


def tp2_check(K, tol: float = config.ORDER_TOL,
              x_grid=None, y_grid=None) -> OrderVerdict:
    """Adjacent 2x2 minor test for total positivity of order 2.

    For positive matrices, nonnegativity of all adjacent minors implies
    nonnegativity of all minors.  Minors containing an entry below 1e-300
    are vacuous (zero support) and skipped.
    """
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] < 2 or K.shape[1] < 2:
        raise DomainError("kernel matrix must be at least 2x2")
    if np.any(K < 0):
        raise DomainError("TP2 kernels must be nonnegative")
    lhs = K[:-1, :-1] * K[1:, 1:]
    rhs = K[:-1, 1:] * K[1:, :-1]
    # minors where both products vanish (entries off the kernel's support)
    # are vacuous 0 >= 0 comparisons; a one-sided zero is a real violation
    valid = (lhs > _TINY) | (rhs > _TINY)
    margins = np.where(valid, lhs - rhs, np.inf)
    worst_flat = int(np.argmin(margins))
    i, j = np.unravel_index(worst_flat, margins.shape)
    verdict = HOLDS
    witness = None
    if margins[i, j] < -tol:
        verdict = FAILS
        witness = {
            "i": int(i), "j": int(j),
            "x": None if x_grid is None else float(np.asarray(x_grid)[i]),
            "y": None if y_grid is None else float(np.asarray(y_grid)[j]),
            "minor": float(lhs[i, j] - rhs[i, j]),
            "margin": float(margins[i, j]),
        }
    return OrderVerdict("tp2", verdict, tol,
                        f"{K.shape[0]}x{K.shape[1]} kernel grid", witness)


def stochastic_order(dist_f: DistributionSpec, dist_g: DistributionSpec,
                     x_grid, tol: float = config.ORDER_TOL) -> OrderVerdict:
    """First-order stochastic dominance of G over F on a grid.

    Holds iff cdf_F(x) >= cdf_G(x) - tol pointwise (F the smaller variable).
    """
    x_grid = np.asarray(x_grid, dtype=float)
    ff = cdf(dist_f, x_grid)
    fg = cdf(dist_g, x_grid)
    margins = ff - fg
    worst = int(np.argmin(margins))
    verdict = HOLDS
    witness = None
    if margins[worst] < -tol:
        verdict = FAILS
        witness = {"x": float(x_grid[worst]), "cdf_f": float(ff[worst]),
                   "cdf_g": float(fg[worst]), "margin": float(margins[worst])}
    return OrderVerdict("stochastic", verdict, tol,
                        f"{len(x_grid)} probe points", witness)
