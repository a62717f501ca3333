"""Uniform abstraction over continuous and integer-valued distributions.

A :class:`DistributionSpec` is an immutable description of a univariate
distribution: a parametric family, an explicit probability mass table, or a
tabulated density (piecewise linear, renormalized on load).  Evaluators
``pdf``, ``cdf`` and ``quantile`` accept scalars or arrays and are pure, so
specs are safe to share across threads.

Quantiles of continuous kinds are computed by bisection against the cdf to
an absolute tolerance, returning the upper bracket so that
``cdf(quantile(p)) >= p`` holds exactly in the inf sense.  Discrete kinds
invert their step cdf exactly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.stats as st

from . import config
from .errors import DataError, DomainError, KindMismatchError, ParseError

__all__ = [
    "CONTINUOUS", "DISCRETE", "TABULATED",
    "DistributionSpec", "Interval", "as_interval",
    "normal", "uniform", "logistic", "double_exponential", "weibull",
    "gamma_dist", "lognormal", "cauchy", "student_t", "geometric", "poisson",
    "mixture", "tabulated_density", "discrete_table", "truncated", "folded_abs",
    "pdf", "cdf", "pmf", "quantile", "support", "breakpoints", "density_kinks",
    "from_string", "load_tabulated_density", "load_pmf_table", "to_dict",
]

CONTINUOUS = "continuous-parametric"
DISCRETE = "discrete-pmf"
TABULATED = "tabulated-density"

_INF = math.inf


@dataclass(frozen=True, eq=False)
class DistributionSpec:
    """Immutable distribution description; build through the factory functions."""

    kind: str
    family: str = ""
    params: tuple = ()
    xs: np.ndarray | None = None
    ys: np.ndarray | None = None
    components: tuple = ()

    def label(self) -> str:
        if self.family == "mixture":
            inner = " + ".join(f"{w:g}*{c.label()}" for w, c in self.components)
            return f"mixture({inner})"
        if self.family in ("truncated", "folded-abs"):
            parent = self.components[0][1].label()
            return f"{self.family}({parent}, {','.join(f'{p:g}' for p in self.params)})"
        if self.kind == TABULATED:
            return f"tabulated[{len(self.xs)} knots]"
        if self.family == "table":
            return f"pmf-table[{len(self.xs)} atoms]"
        if self.params:
            return f"{self.family}:{','.join(f'{p:g}' for p in self.params)}"
        return self.family


@dataclass(frozen=True)
class Interval:
    """Ordered pair of extended reals with lo < hi."""

    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise DomainError("interval endpoints must not be NaN")
        if not self.lo < self.hi:
            raise DomainError(f"interval requires lo < hi, got ({self.lo}, {self.hi})")

    @property
    def finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)


def as_interval(iv) -> Interval:
    if isinstance(iv, Interval):
        return iv
    lo, hi = iv
    return Interval(lo, hi)


# ---------------------------------------------------------------------------
# factories

def _check(cond: bool, message: str):
    if not cond:
        raise DomainError(message)


def normal(mu: float, sigma: float) -> DistributionSpec:
    _check(sigma > 0, "normal requires sigma > 0")
    return DistributionSpec(CONTINUOUS, "normal", (float(mu), float(sigma)))


def uniform(left: float, right: float) -> DistributionSpec:
    _check(left < right, "uniform requires left < right")
    return DistributionSpec(CONTINUOUS, "uniform", (float(left), float(right)))


def logistic() -> DistributionSpec:
    return DistributionSpec(CONTINUOUS, "logistic")


def double_exponential() -> DistributionSpec:
    return DistributionSpec(CONTINUOUS, "double-exponential")


def weibull(c: float) -> DistributionSpec:
    _check(c > 0, "weibull requires shape c > 0")
    return DistributionSpec(CONTINUOUS, "weibull", (float(c),))


def gamma_dist(c: float) -> DistributionSpec:
    _check(c > 0, "gamma requires shape c > 0")
    return DistributionSpec(CONTINUOUS, "gamma", (float(c),))


def lognormal() -> DistributionSpec:
    return DistributionSpec(CONTINUOUS, "lognormal")


def cauchy() -> DistributionSpec:
    return DistributionSpec(CONTINUOUS, "cauchy")


def student_t(nu: float) -> DistributionSpec:
    _check(nu > 0, "student-t requires nu > 0")
    return DistributionSpec(CONTINUOUS, "student-t", (float(nu),))


def geometric(p: float) -> DistributionSpec:
    """Number of failures before the first success: p(k) = p (1-p)^k, k >= 0."""
    _check(0 < p < 1, "geometric requires 0 < p < 1")
    return DistributionSpec(DISCRETE, "geometric", (float(p),))


def poisson(lam: float) -> DistributionSpec:
    _check(lam > 0, "poisson requires lambda > 0")
    return DistributionSpec(DISCRETE, "poisson", (float(lam),))


def mixture(components) -> DistributionSpec:
    comps = tuple((float(w), c) for w, c in components)
    _check(len(comps) >= 1, "mixture needs at least one component")
    _check(all(w >= 0 for w, _ in comps), "mixture weights must be nonnegative")
    total = sum(w for w, _ in comps)
    _check(abs(total - 1.0) <= 1e-12, f"mixture weights must sum to 1, got {total!r}")
    _check(all(c.kind != DISCRETE for _, c in comps), "mixture components must be continuous")
    return DistributionSpec(CONTINUOUS, "mixture", (), components=comps)


def tabulated_density(xs, ys) -> DistributionSpec:
    """Piecewise-linear density; renormalized by its trapezoid integral."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    _check(xs.ndim == 1 and xs.shape == ys.shape and len(xs) >= 2,
           "tabulated density needs matching 1-d arrays with >= 2 knots")
    _check(bool(np.all(np.diff(xs) > 0)), "tabulated abscissae must be strictly increasing")
    _check(bool(np.all(ys >= 0)), "tabulated density values must be nonnegative")
    total = float(np.trapezoid(ys, xs))
    if total <= 0:
        raise DataError("tabulated density integrates to zero")
    return DistributionSpec(TABULATED, "tabulated", (), xs=xs, ys=ys / total)


def discrete_table(ks, ps) -> DistributionSpec:
    """Explicit pmf table on integer support; renormalized if needed."""
    ks = np.asarray(ks)
    ps = np.asarray(ps, dtype=float)
    _check(ks.ndim == 1 and ks.shape == ps.shape and len(ks) >= 1,
           "pmf table needs matching 1-d arrays")
    kf = ks.astype(float)
    _check(bool(np.all(kf == np.round(kf))), "pmf support must be integer-valued")
    _check(bool(np.all(np.diff(kf) > 0)), "pmf support must be strictly increasing")
    _check(bool(np.all(ps >= 0)), "pmf values must be nonnegative")
    total = float(ps.sum())
    if total <= 0:
        raise DataError("pmf sums to zero")
    if abs(total - 1.0) > 1e-6:
        raise DataError(f"pmf sums to {total!r}, too far from 1 to renormalize")
    return DistributionSpec(DISCRETE, "table", (), xs=kf.astype(np.int64), ys=ps / total)


def truncated(parent: DistributionSpec, lo: float, hi: float) -> DistributionSpec:
    """Law of X | lo < X < hi, with exact cdf/quantile delegation to the parent."""
    _check(parent.kind != DISCRETE, "truncated wrapper is for continuous kinds")
    iv = Interval(lo, hi)
    mass = float(cdf(parent, iv.hi) - cdf(parent, iv.lo))
    if mass < config.MASS_FLOOR:
        raise DomainError("truncation interval carries no mass")
    return DistributionSpec(CONTINUOUS, "truncated", (iv.lo, iv.hi),
                            components=((1.0, parent),))


def folded_abs(parent: DistributionSpec, a: float) -> DistributionSpec:
    """Law of |X| given |X| < a for a continuous parent."""
    _check(parent.kind != DISCRETE, "folded-abs wrapper is for continuous kinds")
    _check(a > 0, "folded-abs requires a > 0")
    mass = float(cdf(parent, a) - cdf(parent, -a))
    if mass < config.MASS_FLOOR:
        raise DomainError("folding interval carries no mass")
    return DistributionSpec(CONTINUOUS, "folded-abs", (float(a),),
                            components=((1.0, parent),))


# ---------------------------------------------------------------------------
# scipy-backed family evaluators

@lru_cache(maxsize=512)
def _frozen(family: str, params: tuple):
    if family == "normal":
        return st.norm(params[0], params[1])
    if family == "uniform":
        return st.uniform(params[0], params[1] - params[0])
    if family == "logistic":
        return st.logistic()
    if family == "double-exponential":
        return st.laplace()
    if family == "weibull":
        return st.weibull_min(params[0])
    if family == "gamma":
        return st.gamma(params[0])
    if family == "lognormal":
        return st.lognorm(1.0)
    if family == "cauchy":
        return st.cauchy()
    if family == "student-t":
        return st.t(params[0])
    if family == "geometric":
        return st.geom(params[0], loc=-1)
    if family == "poisson":
        return st.poisson(params[0])
    raise DomainError(f"unknown family {family!r}")


def _wrap_shape(fn):
    def wrapped(dist, x):
        arr = np.asarray(x, dtype=float)
        out = fn(dist, np.atleast_1d(arr).reshape(-1)).reshape(np.atleast_1d(arr).shape)
        if arr.ndim == 0:
            return float(out[0])
        return out.reshape(arr.shape)

    return wrapped


def _pdf_arr(dist: DistributionSpec, x: np.ndarray) -> np.ndarray:
    if dist.kind == TABULATED:
        return np.interp(x, dist.xs, dist.ys, left=0.0, right=0.0)
    fam = dist.family
    if fam == "mixture":
        out = np.zeros_like(x)
        for w, comp in dist.components:
            out += w * _pdf_arr(comp, x)
        return out
    if fam == "truncated":
        lo, hi = dist.params
        parent = dist.components[0][1]
        mass = _cdf_arr(parent, np.array([hi]))[0] - _cdf_arr(parent, np.array([lo]))[0]
        out = np.where((x > lo) & (x < hi), _pdf_arr(parent, x) / mass, 0.0)
        return out
    if fam == "folded-abs":
        a = dist.params[0]
        parent = dist.components[0][1]
        mass = _cdf_arr(parent, np.array([a]))[0] - _cdf_arr(parent, np.array([-a]))[0]
        inside = (x > 0) & (x < a)
        vals = _pdf_arr(parent, x) + _pdf_arr(parent, -x)
        return np.where(inside, vals / mass, 0.0)
    return np.asarray(_frozen(fam, dist.params).pdf(x), dtype=float)


def _cdf_arr(dist: DistributionSpec, x: np.ndarray) -> np.ndarray:
    if dist.kind == TABULATED:
        return _tabulated_cdf(dist, x)
    fam = dist.family
    if fam == "mixture":
        out = np.zeros_like(x)
        for w, comp in dist.components:
            out += w * _cdf_arr(comp, x)
        return out
    if fam == "truncated":
        lo, hi = dist.params
        parent = dist.components[0][1]
        flo = _cdf_arr(parent, np.array([lo]))[0]
        fhi = _cdf_arr(parent, np.array([hi]))[0]
        vals = (_cdf_arr(parent, x) - flo) / (fhi - flo)
        return np.clip(vals, 0.0, 1.0)
    if fam == "folded-abs":
        a = dist.params[0]
        parent = dist.components[0][1]
        mass = _cdf_arr(parent, np.array([a]))[0] - _cdf_arr(parent, np.array([-a]))[0]
        xc = np.clip(x, 0.0, a)
        vals = (_cdf_arr(parent, xc) - _cdf_arr(parent, -xc)) / mass
        return np.clip(vals, 0.0, 1.0)
    if dist.kind == DISCRETE and fam == "table":
        cum = np.concatenate([[0.0], np.cumsum(dist.ys)])
        idx = np.searchsorted(dist.xs.astype(float), x, side="right")
        return cum[idx]
    return np.asarray(_frozen(fam, dist.params).cdf(x), dtype=float)


def _tabulated_cdf(dist: DistributionSpec, x: np.ndarray) -> np.ndarray:
    xs, ys = dist.xs, dist.ys
    widths = np.diff(xs)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (ys[1:] + ys[:-1]) * widths)])
    total = cum[-1]
    idx = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, len(xs) - 2)
    x0 = xs[idx]
    y0 = ys[idx]
    slope = (ys[idx + 1] - y0) / widths[idx]
    t = np.clip(x - x0, 0.0, widths[idx])
    partial = y0 * t + 0.5 * slope * t * t
    vals = (cum[idx] + partial) / total
    vals = np.where(x <= xs[0], 0.0, vals)
    vals = np.where(x >= xs[-1], 1.0, vals)
    return np.clip(vals, 0.0, 1.0)


def pdf(dist: DistributionSpec, x):
    """Density at x.  Raises KindMismatchError for discrete distributions."""
    if dist.kind == DISCRETE:
        raise KindMismatchError("density queried on a discrete distribution; use pmf")
    return _wrap_shape(_pdf_arr)(dist, x)


def cdf(dist: DistributionSpec, x):
    """Cumulative distribution function; right-continuous step for discrete kinds."""
    return _wrap_shape(_cdf_arr)(dist, x)


def pmf(dist: DistributionSpec, k):
    """Probability mass at integer points of a discrete distribution."""
    if dist.kind != DISCRETE:
        raise KindMismatchError("pmf queried on a non-discrete distribution; use pdf")
    arr = np.asarray(k, dtype=float)
    flat = np.atleast_1d(arr).reshape(-1)
    if dist.family == "table":
        out = np.zeros_like(flat)
        pos = np.searchsorted(dist.xs.astype(float), flat)
        pos = np.clip(pos, 0, len(dist.xs) - 1)
        hit = dist.xs.astype(float)[pos] == flat
        out[hit] = dist.ys[pos[hit]]
    else:
        out = np.asarray(_frozen(dist.family, dist.params).pmf(flat), dtype=float)
    out = out.reshape(np.atleast_1d(arr).shape)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def support(dist: DistributionSpec) -> tuple[float, float]:
    if dist.kind == TABULATED:
        return float(dist.xs[0]), float(dist.xs[-1])
    fam = dist.family
    if fam in ("normal", "logistic", "double-exponential", "cauchy", "student-t"):
        return -_INF, _INF
    if fam == "uniform":
        return dist.params[0], dist.params[1]
    if fam in ("weibull", "gamma", "lognormal"):
        return 0.0, _INF
    if fam in ("geometric", "poisson"):
        return 0.0, _INF
    if fam == "table":
        return float(dist.xs[0]), float(dist.xs[-1])
    if fam == "mixture":
        los, his = zip(*(support(c) for _, c in dist.components))
        return min(los), max(his)
    if fam == "truncated":
        plo, phi = support(dist.components[0][1])
        return max(plo, dist.params[0]), min(phi, dist.params[1])
    if fam == "folded-abs":
        return 0.0, dist.params[0]
    raise DomainError(f"unknown family {fam!r}")


def quantile(dist: DistributionSpec, p):
    """inf{x : F(x) >= p} for 0 < p < 1."""
    arr = np.asarray(p, dtype=float)
    flat = np.atleast_1d(arr).reshape(-1)
    if np.any(~np.isfinite(flat)) or np.any(flat <= 0.0) or np.any(flat >= 1.0):
        raise DomainError("quantile requires probabilities strictly inside (0, 1)")
    if dist.kind == DISCRETE:
        if dist.family == "table":
            cum = np.cumsum(dist.ys)
            cum[-1] = 1.0
            idx = np.searchsorted(cum, flat - 1e-15, side="left")
            out = dist.xs.astype(float)[np.clip(idx, 0, len(cum) - 1)]
        else:
            out = np.asarray(_frozen(dist.family, dist.params).ppf(flat), dtype=float)
    else:
        out = _bisect_quantile(dist, flat)
    out = out.reshape(np.atleast_1d(arr).shape)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def _bisect_quantile(dist: DistributionSpec, ps: np.ndarray) -> np.ndarray:
    lo_s, hi_s = support(dist)
    n = len(ps)
    lo = np.full(n, lo_s if math.isfinite(lo_s) else -1.0)
    hi = np.full(n, hi_s if math.isfinite(hi_s) else 1.0)
    if not math.isfinite(lo_s):
        for _ in range(1200):
            mask = _cdf_arr(dist, lo) >= ps
            if not np.any(mask):
                break
            lo[mask] = lo[mask] * 2.0 - 1.0
    if not math.isfinite(hi_s):
        for _ in range(1200):
            mask = _cdf_arr(dist, hi) < ps
            if not np.any(mask):
                break
            hi[mask] = hi[mask] * 2.0 + 1.0
    for _ in range(200):
        width = hi - lo
        tol = np.maximum(config.QUANTILE_TOL, 4e-16 * np.maximum(np.abs(lo), np.abs(hi)))
        if np.all(width <= tol):
            break
        mid = 0.5 * (lo + hi)
        ge = _cdf_arr(dist, mid) >= ps
        hi = np.where(ge, mid, hi)
        lo = np.where(ge, lo, mid)
    return hi


def breakpoints(dist: DistributionSpec, lo: float, hi: float) -> np.ndarray:
    """Interior points worth seeding quadrature panels at (spikes, kinks, knots)."""
    pts: list[float] = []

    def collect(d: DistributionSpec):
        fam = d.family
        if d.kind == TABULATED:
            pts.extend(d.xs.tolist())
        elif fam == "normal":
            mu, sigma = d.params
            pts.extend(mu + sigma * off for off in (-8.0, -2.0, 0.0, 2.0, 8.0))
        elif fam == "uniform":
            pts.extend(d.params)
        elif fam in ("double-exponential", "cauchy", "logistic", "student-t"):
            pts.append(0.0)
        elif fam == "mixture":
            for _, comp in d.components:
                collect(comp)
        elif fam == "truncated":
            pts.extend(d.params)
            collect(d.components[0][1])
        elif fam == "folded-abs":
            pts.append(d.params[0])
            parent = d.components[0][1]
            before = len(pts)
            collect(parent)
            tail = pts[before:]
            del pts[before:]
            pts.extend(abs(t) for t in tail)

    collect(dist)
    arr = np.asarray([p for p in pts if lo < p < hi], dtype=float)
    return np.unique(arr)


def density_kinks(dist: DistributionSpec, lo: float, hi: float) -> np.ndarray:
    """Points where the density jumps or kinks (uniform edges, knots)."""
    pts: list[float] = []

    def collect(d: DistributionSpec):
        if d.kind == TABULATED:
            pts.extend(d.xs.tolist())
        elif d.family == "uniform":
            pts.extend(d.params)
        elif d.family == "double-exponential":
            pts.append(0.0)
        elif d.family == "mixture":
            for _, comp in d.components:
                collect(comp)
        elif d.family in ("truncated", "folded-abs"):
            pts.extend(d.params)
            collect(d.components[0][1])

    collect(dist)
    arr = np.asarray([p for p in pts if lo < p < hi], dtype=float)
    return np.unique(arr)


# ---------------------------------------------------------------------------
# text interfaces

_ARITY = {
    "normal": 2, "uniform": 2, "logistic": 0, "double-exponential": 0,
    "weibull": 1, "gamma": 1, "lognormal": 0, "cauchy": 0, "student-t": 1,
    "geometric": 1, "poisson": 1,
}

_FACTORIES = {
    "normal": normal, "uniform": uniform, "logistic": logistic,
    "double-exponential": double_exponential, "weibull": weibull,
    "gamma": gamma_dist, "lognormal": lognormal, "cauchy": cauchy,
    "student-t": student_t, "geometric": geometric, "poisson": poisson,
}


def from_string(text: str) -> DistributionSpec:
    """Parse the ``family:param,param`` mini-language, e.g. ``normal:0,1``."""
    text = text.strip()
    name, _, rest = text.partition(":")
    name = name.strip()
    if name not in _ARITY:
        raise ParseError(f"unknown distribution family {name!r}")
    arity = _ARITY[name]
    if arity == 0:
        if rest.strip():
            raise ParseError(f"family {name!r} takes no parameters")
        return _FACTORIES[name]()
    raw = [r for r in rest.split(",") if r.strip() != ""]
    if len(raw) != arity:
        raise ParseError(f"family {name!r} expects {arity} parameter(s), got {len(raw)}")
    try:
        params = [float(r) for r in raw]
    except ValueError as exc:
        raise ParseError(f"bad numeric parameter in {text!r}: {exc}") from None
    try:
        return _FACTORIES[name](*params)
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def _read_csv_rows(path, expected_header: tuple[str, str]):
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        rows = list(reader)
    if not rows:
        raise ParseError("empty file", line=1)
    header = [h.strip().lower() for h in rows[0]]
    if header != list(expected_header):
        raise ParseError(
            f"expected header {','.join(expected_header)!r}, got {','.join(header)!r}",
            line=1,
        )
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 columns, got {len(row)}", line=lineno)
        try:
            out.append((float(row[0]), float(row[1]), lineno))
        except ValueError:
            raise ParseError(f"non-numeric value {row!r}", line=lineno) from None
    if len(out) < 1:
        raise ParseError("no data rows", line=2)
    return out


def load_tabulated_density(path) -> DistributionSpec:
    """Load an ``x,pdf`` CSV with strictly increasing x."""
    rows = _read_csv_rows(path, ("x", "pdf"))
    if len(rows) < 2:
        raise ParseError("need at least two density knots", line=rows[0][2])
    xs = np.array([r[0] for r in rows])
    ys = np.array([r[1] for r in rows])
    for i in range(1, len(xs)):
        if xs[i] <= xs[i - 1]:
            raise ParseError(f"abscissa {xs[i]!r} not strictly increasing", line=rows[i][2])
    for i, y in enumerate(ys):
        if y < 0:
            raise ParseError(f"negative density {y!r}", line=rows[i][2])
    return tabulated_density(xs, ys)


def load_pmf_table(path) -> DistributionSpec:
    """Load a ``k,pmf`` CSV with integer k."""
    rows = _read_csv_rows(path, ("k", "pmf"))
    ks = np.array([r[0] for r in rows])
    ps = np.array([r[1] for r in rows])
    for i, k in enumerate(ks):
        if k != round(k):
            raise ParseError(f"non-integer support point {k!r}", line=rows[i][2])
    for i in range(1, len(ks)):
        if ks[i] <= ks[i - 1]:
            raise ParseError(f"support point {ks[i]!r} not strictly increasing", line=rows[i][2])
    for i, p in enumerate(ps):
        if p < 0:
            raise ParseError(f"negative mass {p!r}", line=rows[i][2])
    try:
        return discrete_table(ks.astype(np.int64), ps)
    except DataError as exc:
        raise ParseError(str(exc)) from None


def to_dict(dist: DistributionSpec) -> dict:
    """JSON-serializable description (used in reports)."""
    out: dict = {"kind": dist.kind}
    if dist.family:
        out["family"] = dist.family
    if dist.params:
        out["params"] = list(dist.params)
    if dist.family == "mixture":
        out["components"] = [
            {"weight": w, **to_dict(c)} for w, c in dist.components
        ]
    if dist.kind == TABULATED:
        out["n_knots"] = int(len(dist.xs))
    if dist.family == "table":
        out["support"] = [int(dist.xs[0]), int(dist.xs[-1])]
    return out
