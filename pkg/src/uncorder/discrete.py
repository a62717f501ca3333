"""Integer-valued variables embedded as piecewise-uniform continuous ones.

An integer variable X with mass p(k) maps to a continuous Y that is uniform
on each block (k - 0.5, k + 0.5] with weight p(k).  On aligned windows the
conditional means agree exactly and the variances differ by exactly 1/12:

    var(X | a <= X <= b) = var(Y | a - 0.5 < Y <= b + 0.5) - 1/12

``embed`` realizes Y as a mixture of uniform blocks, which keeps every block
integral exact under the panel quadrature; ``link_check`` measures the
residual of the identity above through the truncated-moments oracle on both
sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import config
from .distributions import (
    DISCRETE,
    DistributionSpec,
    discrete_table,
    mixture,
    pmf,
    uniform,
)
from .errors import DegenerateIntervalError, DomainError, KindMismatchError
from .reports import FAILS, HOLDS, MonotonicityReport, Witness
from .truncated import truncated_moments_oracle

__all__ = ["PmfTable", "embed", "link_check", "discrete_monotonicity"]


@dataclass(frozen=True, eq=False)
class PmfTable:
    """Finite probability mass table on strictly increasing integer support."""

    ks: np.ndarray
    ps: np.ndarray
    source: str = "table"
    dropped_tail: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "ks", np.asarray(self.ks, dtype=np.int64))
        object.__setattr__(self, "ps", np.asarray(self.ps, dtype=float))
        if self.ks.ndim != 1 or self.ks.shape != self.ps.shape or len(self.ks) < 1:
            raise DomainError("pmf table needs matching 1-d arrays")
        if not np.all(np.diff(self.ks) > 0):
            raise DomainError("pmf support must be strictly increasing")
        if np.any(self.ps < 0):
            raise DomainError("pmf values must be nonnegative")
        total = float(self.ps.sum())
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"pmf must sum to 1 within 1e-12, got {total!r}")

    @classmethod
    def from_dist(cls, dist: DistributionSpec,
                  tail: float = config.PMF_TAIL) -> "PmfTable":
        """Materialize a finite table, truncating negligible tails.

        Infinite-support families are cut where the remaining upper-tail mass
        drops below ``tail`` and renormalized; the dropped mass is recorded.
        """
        if dist.kind != DISCRETE:
            raise KindMismatchError("pmf table requires a discrete distribution")
        if dist.family == "table":
            return cls(dist.xs, dist.ys, source="table")
        k = 0
        ps = []
        acc = 0.0
        while acc < 1.0 - tail and k < 100_000:
            ps.append(pmf(dist, k))
            acc += ps[-1]
            k += 1
        ps_arr = np.asarray(ps)
        dropped = max(1.0 - acc, 0.0)
        return cls(np.arange(len(ps_arr)), ps_arr / ps_arr.sum(),
                   source=dist.label(), dropped_tail=dropped)

    def to_dist(self) -> DistributionSpec:
        return discrete_table(self.ks, self.ps)

    def window_moments(self, a: int, b: int):
        """Exact (mass, mean, variance) of X given a <= X <= b."""
        sel = (self.ks >= a) & (self.ks <= b)
        mass = float(self.ps[sel].sum())
        if mass <= 0.0:
            return 0.0, math.nan, math.nan
        ks = self.ks[sel].astype(float)
        ws = self.ps[sel] / mass
        mean = float((ks * ws).sum())
        var = float((ks * ks * ws).sum() - mean * mean)
        return mass, mean, max(var, 0.0)


def embed(pmf_table: PmfTable) -> DistributionSpec:
    """Continuous spec with density p(k) on each block (k-0.5, k+0.5]."""
    comps = [
        (float(p), uniform(k - 0.5, k + 0.5))
        for k, p in zip(pmf_table.ks, pmf_table.ps)
        if p > 0.0
    ]
    if len(comps) == 1:
        # single block: plain uniform, weight is exactly 1
        return comps[0][1]
    total = sum(w for w, _ in comps)
    comps = [(w / total, c) for w, c in comps]
    return mixture(comps)


def link_check(pmf_table: PmfTable, a: int, b: int) -> float:
    """Residual var(X | a<=X<=b) - var(Y | a-0.5<Y<=b+0.5) + 1/12.

    Both variances go through the truncated-moments oracle; the contract is
    |residual| <= 1e-9 for any valid window.
    """
    if a > b:
        raise DomainError("window requires a <= b")
    # the half-open window (a-0.5, b+0.5) captures exactly the integers a..b
    # on the discrete side and is the aligned window for Y, so one interval
    # serves both oracles (and stays valid when a == b)
    x_m = truncated_moments_oracle(pmf_table.to_dist(), (a - 0.5, b + 0.5))
    y_dist = embed(pmf_table)
    y_m = truncated_moments_oracle(y_dist, (a - 0.5, b + 0.5))
    if x_m.mass <= 0:
        raise DegenerateIntervalError(f"window [{a}, {b}] carries no mass")
    return float(x_m.variance - y_m.variance + 1.0 / 12.0)


def discrete_monotonicity(pmf_table: PmfTable, window, tol: float = 1e-9) -> MonotonicityReport:
    """Exhaustive integer sub-interval sweep of the conditional variance.

    Variance must be nondecreasing in b and nonincreasing in a across all
    adjacent integer windows inside ``window``; zero-mass windows are skipped.
    """
    ka, kb = int(window[0]), int(window[1])
    if ka > kb:
        raise DomainError("window requires a <= b")
    span = np.arange(ka, kb + 1)
    n = len(span)
    var = np.full((n, n), np.nan)
    n_skipped = 0
    for i, a in enumerate(span):
        for j, b in enumerate(span):
            if a > b:
                continue
            mass, _, v = pmf_table.window_moments(a, b)
            if mass <= 0.0:
                n_skipped += 1
                continue
            var[i, j] = v

    witnesses: list[Witness] = []
    n_checked = 0
    for i in range(n):
        cols = [j for j in range(n) if not np.isnan(var[i, j])]
        for j0, j1 in zip(cols[:-1], cols[1:]):
            n_checked += 1
            margin = var[i, j1] - var[i, j0]
            if margin < -tol:
                witnesses.append(Witness(float(span[i]), float(span[j0]),
                                         float(span[i]), float(span[j1]),
                                         float(var[i, j0]), float(var[i, j1]),
                                         float(margin)))
    for j in range(n):
        rows = [i for i in range(n) if not np.isnan(var[i, j])]
        for i0, i1 in zip(rows[:-1], rows[1:]):
            n_checked += 1
            margin = var[i0, j] - var[i1, j]
            if margin < -tol:
                witnesses.append(Witness(float(span[i0]), float(span[j]),
                                         float(span[i1]), float(span[j]),
                                         float(var[i0, j]), float(var[i1, j]),
                                         float(margin)))

    report = MonotonicityReport(
        claim="discrete-conditional-variance-partially-monotonic",
        verdict=FAILS if witnesses else HOLDS,
        tolerance=tol,
        grid_spec=f"integer windows within [{ka}, {kb}]",
        witnesses=witnesses,
        n_skipped=n_skipped,
        n_checked=n_checked,
    )
    report.variances = var
    report.span = span
    return report
