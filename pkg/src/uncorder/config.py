"""Numeric defaults shared across the library.

Everything here is a plain module constant; operations take explicit
keyword overrides where a different tolerance makes sense.
"""

import os

# Absolute tolerance for one-off adaptive integrals.
DEFAULT_QUAD_TOL = 1e-10

# Per-segment error budget for cumulative (antiderivative) quadrature.
PANEL_TOL = 1e-12

# Panels per conditioning interval when building antiderivative grids.
DEFAULT_PANELS = 2048

# Smallest conditioning mass treated as non-degenerate.
MASS_FLOOR = 1e-12

# Quantile clip for infinite supports: internal grids span [q(eps), q(1-eps)].
TAIL_EPS = 1e-10

# Absolute bisection tolerance for continuous quantiles.
QUANTILE_TOL = 1e-10

# Chord-deficit tolerance (relative to local log scale) for concavity verdicts.
LOGCONC_TOL = 1e-7

# Monotonicity sweep tolerance: a violation requires margin < -tol.
SWEEP_TOL = 1e-7

# Default tolerance for order verdicts (stochastic, TP2, likelihood ratio).
ORDER_TOL = 1e-9

# Default symmetric u-grid size for difference densities (odd, includes 0).
DIFF_GRID_POINTS = 4097

# Central-difference step for du derivatives, as a fraction of the box size.
FD_STEP_FRACTION = 1e-5

# Mass below which infinite discrete tails are truncated before embedding.
PMF_TAIL = 1e-14

# Hard floor before taking log of a density value (x log x convention at 0).
LOG_FLOOR = 1e-300

MAX_EVALS_ENV = "UO_MAX_EVALS"
DEFAULT_MAX_EVALS = 10**6


def max_evals() -> int:
    """Evaluation cap for adaptive quadrature, overridable via UO_MAX_EVALS."""
    raw = os.environ.get(MAX_EVALS_ENV)
    if not raw:
        return DEFAULT_MAX_EVALS
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_MAX_EVALS
    return max(value, 15)
