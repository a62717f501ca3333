"""Interval-conditioned uncertainty diagnostics for univariate distributions.

Truncated moments by two independent routes, log-concavity criteria for
partial monotonicity of the conditional variance, stochastic-order
verifiers, an exact integer-to-continuous embedding, and difference-based
uncertainty measures (Gini mean difference, Shannon entropy of X1 - X2).
"""

from .counterexample import CounterexampleResult, search_counterexample
from .differences import (
    DiffDensity,
    EntropyValue,
    NonLogConcaveWarning,
    diff_density,
    entropy_inequality_chain,
    expected_phi,
    g_matrix,
    g_monotone_check,
    g_value,
    shannon_entropy_of_difference,
    tp2_derivative_check,
)
from .discrete import PmfTable, discrete_monotonicity, embed, link_check
from .distributions import (
    DistributionSpec,
    Interval,
    cauchy,
    cdf,
    discrete_table,
    double_exponential,
    folded_abs,
    from_string,
    gamma_dist,
    geometric,
    load_pmf_table,
    load_tabulated_density,
    logistic,
    lognormal,
    mixture,
    normal,
    pdf,
    pmf,
    poisson,
    quantile,
    student_t,
    support,
    tabulated_density,
    truncated,
    uniform,
    weibull,
)
from .errors import (
    DataError,
    DegenerateIntervalError,
    DisjointSupportError,
    DomainError,
    KindMismatchError,
    ParseError,
    UncorderError,
)
from .logconcavity import (
    condition_in_a,
    condition_in_b,
    is_log_concave,
    variance_slope_sign_check,
)
from .orders import dispersion_order, likelihood_ratio_order, stochastic_order, tp2_check
from .quadrature import GridFunction, QuadResult, antiderivative, integrate
from .reports import (
    ChainReport,
    ConcavityVerdict,
    MonotonicityReport,
    OrderVerdict,
    TruncatedMoments,
    Witness,
    validate_report,
)
from .truncated import (
    monotonicity_sweep,
    truncated_moments_oracle,
    truncated_variance_formula,
)

__version__ = "0.1.0"
