"""Deterministic search for distributions with non-monotone conditional variance.

The default search space is three-component normal mixtures whose components
are narrow spikes (sigma between 1e-2 and 1e-1) placed on a coarse location
grid: two far-apart spikes pull the variance of a growing interval up to the
two-point value, and a third spike just past the second drags it back down.
Every reported witness is re-verified with the direct truncated-moments
oracle before the candidate is accepted.

Two restricted presets exist for negative controls: single normals (always
monotone) and symmetric two-spike mixtures probed with symmetric windows
(monotone under symmetric truncation).  Both exhaust without a finding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .distributions import DistributionSpec, mixture, normal
from .errors import DegenerateIntervalError, DomainError
from .reports import FAILS, HOLDS, MonotonicityReport, Witness
from .truncated import monotonicity_sweep, truncated_moments_oracle

__all__ = ["CounterexampleResult", "search_counterexample", "SEARCH_PRESETS"]

SEARCH_PRESETS = ("default", "single-normal", "symmetric-two-spike")


@dataclass
class CounterexampleResult:
    found: bool
    mixture: DistributionSpec | None
    report: MonotonicityReport | None
    oracle_margin: float | None
    n_tried: int
    search: str


def _default_candidates():
    for sep in (5.0, 10.0):
        for gap in (0.1, 0.5, 1.0):
            for sigma in (0.01, 0.05, 0.1):
                for weights in ((1 / 3, 1 / 3, 1 / 3), (0.25, 0.5, 0.25)):
                    locs = (0.0, sep, sep + gap)
                    comps = [(w, normal(m, sigma)) for w, m in zip(weights, locs)]
                    window = (-1.0, sep + gap + 1.0)
                    yield mixture(comps), window


def _oracle_margin(dist: DistributionSpec, witness: Witness) -> float:
    """Recompute the witness pair with the direct oracle; margin < 0 confirms."""
    first = truncated_moments_oracle(dist, (witness.a1, witness.b1))
    second = truncated_moments_oracle(dist, (witness.a2, witness.b2))
    if witness.a1 == witness.a2:
        return second.variance - first.variance  # grew in b, should not drop
    return first.variance - second.variance  # shrank in a, should not grow


def _confirmed(dist: DistributionSpec, report: MonotonicityReport,
               margin_required: float) -> float | None:
    best = None
    for witness in report.witnesses:
        try:
            margin = _oracle_margin(dist, witness)
        except DegenerateIntervalError:
            continue
        if margin < -margin_required and (best is None or margin < best):
            best = margin
    return best


def _search_default(tol: float, margin_required: float) -> CounterexampleResult:
    n = 0
    for cand, window in _default_candidates():
        n += 1
        report = monotonicity_sweep(cand, window, 21, 21, tol=tol)
        if report.verdict != FAILS:
            continue
        margin = _confirmed(cand, report, margin_required)
        if margin is not None:
            return CounterexampleResult(True, cand, report, margin, n, "default")
    return CounterexampleResult(False, None, None, None, n, "default")


def _search_single_normal(tol: float) -> CounterexampleResult:
    n = 0
    for mu, sigma in ((0.0, 0.5), (0.0, 1.0), (2.0, 1.0), (0.0, 3.0)):
        n += 1
        cand = normal(mu, sigma)
        window = (mu - 4 * sigma, mu + 4 * sigma)
        report = monotonicity_sweep(cand, window, 21, 21, tol=tol)
        if report.verdict == FAILS:
            margin = _confirmed(cand, report, 0.0)
            if margin is not None:
                return CounterexampleResult(True, cand, report, margin, n,
                                            "single-normal")
    return CounterexampleResult(False, None, None, None, n, "single-normal")


def _symmetric_sweep(dist: DistributionSpec, c_grid: np.ndarray,
                     tol: float) -> MonotonicityReport:
    """Variance over nested symmetric windows (-c, c), nondecreasing in c."""
    variances = []
    kept = []
    for c in c_grid:
        try:
            m = truncated_moments_oracle(dist, (-c, c))
        except DegenerateIntervalError:
            continue
        variances.append(m.variance)
        kept.append(c)
    witnesses = []
    for (c0, v0), (c1, v1) in zip(zip(kept[:-1], variances[:-1]),
                                  zip(kept[1:], variances[1:])):
        margin = v1 - v0
        if margin < -tol:
            witnesses.append(Witness(-c0, c0, -c1, c1, v0, v1, float(margin)))
    report = MonotonicityReport(
        claim="symmetric-window-variance-nondecreasing",
        verdict=FAILS if witnesses else HOLDS,
        tolerance=tol,
        grid_spec=f"{len(kept)} symmetric windows",
        witnesses=witnesses,
        n_skipped=len(c_grid) - len(kept),
        n_checked=max(len(kept) - 1, 0),
    )
    return report


def _search_symmetric_two_spike(tol: float) -> CounterexampleResult:
    n = 0
    for d in (5.0, 10.0):
        for sigma in (0.01, 0.05, 0.1):
            n += 1
            cand = mixture([(0.5, normal(-d, sigma)), (0.5, normal(d, sigma))])
            c_grid = np.unique(np.concatenate([
                np.linspace(d - 5 * sigma, d + 5 * sigma, 15),
                np.linspace(0.5, d + 2.0, 10),
            ]))
            report = _symmetric_sweep(cand, c_grid, tol)
            if report.verdict == FAILS:
                margin = _confirmed(cand, report, 0.0)
                if margin is not None:
                    return CounterexampleResult(True, cand, report, margin, n,
                                                "symmetric-two-spike")
    return CounterexampleResult(False, None, None, None, n, "symmetric-two-spike")


def search_counterexample(search: str = "default", tol: float = config.SWEEP_TOL,
                          margin_required: float = 1e-3) -> CounterexampleResult:
    """Scan the chosen candidate grid; return the first oracle-confirmed failure."""
    if search == "default":
        return _search_default(tol, margin_required)
    if search == "single-normal":
        return _search_single_normal(tol)
    if search == "symmetric-two-spike":
        return _search_symmetric_two_spike(tol)
    raise DomainError(f"unknown search preset {search!r}; choose from {SEARCH_PRESETS}")
