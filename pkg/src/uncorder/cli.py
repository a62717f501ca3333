"""Command-line front end.

Commands: ``moments``, ``sweep``, ``conditions``, ``orders``, ``diff``,
``entropy``, ``embed``, ``counterexample``.  Reports are emitted as JSON
(validated against the shipped schema), CSV where the output is a sweep
table, or pretty text; ``--plot`` renders a PNG figure next to ``--out``.

Exit codes: 0 success (including negative verdicts, which are valid
results), 1 usage or parse error, 2 degenerate input, 3 counterexample
search exhausted.  Output is deterministic: the same invocation produces
byte-identical reports.
"""

from __future__ import annotations

import functools
import sys
from pathlib import Path

import click
import numpy as np

from . import config, reports
from .counterexample import SEARCH_PRESETS, search_counterexample
from .differences import (
    diff_density,
    entropy_inequality_chain,
    g_matrix,
    g_monotone_check,
    shannon_entropy_of_difference,
)
from .discrete import PmfTable, discrete_monotonicity, embed, link_check
from .distributions import (
    DISCRETE,
    DistributionSpec,
    folded_abs,
    from_string,
    load_pmf_table,
    load_tabulated_density,
    quantile,
    to_dict,
    truncated,
)
from .errors import (
    DegenerateIntervalError,
    DomainError,
    DisjointSupportError,
    KindMismatchError,
    ParseError,
    UncorderError,
)
from .logconcavity import condition_in_a, condition_in_b, variance_slope_sign_check
from .orders import dispersion_order, stochastic_order, tp2_check
from .truncated import monotonicity_sweep, truncated_moments_oracle, truncated_variance_formula

# usage errors exit with 1, not click's default 2 (2 means degenerate input here)
click.UsageError.exit_code = 1

EXIT_DEGENERATE = 2
EXIT_EXHAUSTED = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DegenerateIntervalError as exc:
            _fail(EXIT_DEGENERATE, str(exc))
        except (ParseError, DomainError, KindMismatchError,
                DisjointSupportError, UncorderError) as exc:
            _fail(1, str(exc))

    return wrapper


def _parse_pair(text: str, name: str) -> tuple[float, float]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ParseError(f"{name} expects two comma-separated numbers, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise ParseError(f"bad number in {name}: {text!r}") from None


def _parse_floats(text: str, name: str) -> np.ndarray:
    try:
        vals = np.array([float(p) for p in text.split(",") if p.strip() != ""])
    except ValueError:
        raise ParseError(f"bad number in {name}: {text!r}") from None
    if len(vals) == 0:
        raise ParseError(f"{name} is empty")
    return vals


def _load_dist(dist: str | None, pdf_file: str | None, pmf_file: str | None) -> DistributionSpec:
    given = [x for x in (dist, pdf_file, pmf_file) if x]
    if len(given) != 1:
        raise ParseError("provide exactly one of --dist, --pdf-file, --pmf-file")
    if dist:
        return from_string(dist)
    if pdf_file:
        return load_tabulated_density(pdf_file)
    return load_pmf_table(pmf_file)


def _emit(payload: dict, fmt: str, out: str | None, pretty_lines=None,
          csv_text: str | None = None):
    if fmt == "json":
        reports.validate_report(payload)
        text = reports.dumps(payload)
    elif fmt == "csv":
        if csv_text is None:
            raise ParseError("this command has no CSV form; use json or pretty")
        text = csv_text
    else:
        text = "\n".join(pretty_lines or [reports.dumps(payload).rstrip("\n")]) + "\n"
    if out:
        Path(out).write_text(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


def _plot_path(out: str | None) -> str:
    if not out:
        raise ParseError("--plot requires --out to name the figure file")
    return str(Path(out).with_suffix(".png"))


_dist_options = [
    click.option("--dist", default=None, help="distribution as family:params, e.g. normal:0,1"),
    click.option("--pdf-file", default=None, type=click.Path(exists=True),
                 help="tabulated density CSV (header x,pdf)"),
    click.option("--pmf-file", default=None, type=click.Path(exists=True),
                 help="pmf CSV (header k,pmf)"),
]


def _add_options(opts):
    def deco(fn):
        for opt in reversed(opts):
            fn = opt(fn)
        return fn

    return deco


_common = [
    click.option("--out", default=None, type=click.Path(), help="write the report here"),
    click.option("--format", "fmt", default="pretty",
                 type=click.Choice(["json", "csv", "pretty"]), help="output format"),
]


@click.group()
def main():
    """Interval-conditioned uncertainty diagnostics."""


# ---------------------------------------------------------------------------


@main.command()
@_add_options(_dist_options)
@click.option("--interval", required=True, help="conditioning interval a,b")
@click.option("--tol", default=config.DEFAULT_QUAD_TOL, show_default=True)
@_add_options(_common)
@_guarded
def moments(dist, pdf_file, pmf_file, interval, tol, out, fmt):
    """Conditional mass/mean/variance on an interval, both routes side by side."""
    d = _load_dist(dist, pdf_file, pmf_file)
    a, b = _parse_pair(interval, "--interval")
    oracle = truncated_moments_oracle(d, (a, b), tol=tol)
    if d.kind == DISCRETE:
        formula = oracle
    else:
        formula = truncated_variance_formula(d, a, b)
    payload = {
        "command": "moments",
        "dist": d.label(),
        "interval": [a, b],
        "oracle": oracle.to_dict(),
        "formula": formula.to_dict(),
        "agreement": abs(oracle.variance - formula.variance),
    }
    lines = [
        f"claim: conditional moments of {d.label()} on ({a:g}, {b:g})",
        f"  direct route        mass={oracle.mass:.10g} mean={oracle.mean:.10g} "
        f"variance={oracle.variance:.10g}",
        f"  antiderivative route mass={formula.mass:.10g} mean={formula.mean:.10g} "
        f"variance={formula.variance:.10g}",
        f"  |variance difference| = {payload['agreement']:.3e}",
    ]
    _emit(payload, fmt, out, lines)


@main.command()
@_add_options(_dist_options)
@click.option("--window", required=True, help="sweep window a,b")
@click.option("--grid", default=21, show_default=True, help="points per axis")
@click.option("--spacing", default="quantile", type=click.Choice(["quantile", "uniform"]),
              show_default=True)
@click.option("--tol", default=config.SWEEP_TOL, show_default=True)
@click.option("--plot", is_flag=True, help="render a PNG next to --out")
@_add_options(_common)
@_guarded
def sweep(dist, pdf_file, pmf_file, window, grid, spacing, tol, plot, out, fmt):
    """Partial-monotonicity sweep of the conditional variance over a window."""
    d = _load_dist(dist, pdf_file, pmf_file)
    lo, hi = _parse_pair(window, "--window")
    if d.kind == DISCRETE:
        table = PmfTable.from_dist(d)
        report = discrete_monotonicity(table, (int(lo), int(hi)), tol=tol)
    else:
        report = monotonicity_sweep(d, (lo, hi), n_a=grid, n_b=grid,
                                    tol=tol, spacing=spacing)
    payload = {"command": "sweep", "dist": d.label(), "report": report.to_dict()}
    lines = [
        "claim: conditional variance grows with the conditioning interval",
        f"  dist: {d.label()}  window: ({lo:g}, {hi:g})  grid: {report.grid_spec}",
        f"  verdict: {report.verdict}  violations: {len(report.witnesses)} "
        f"(skipped {report.n_skipped} degenerate cells)",
    ]
    for w in report.witnesses[:5]:
        lines.append(f"    witness ({w.a1:g},{w.b1:g}) -> ({w.a2:g},{w.b2:g}): "
                     f"var {w.var1:.6g} -> {w.var2:.6g} margin {w.margin:.3e}")
    if plot and hasattr(report, "details"):
        from .plots import save_sweep_figure

        save_sweep_figure(report.details, report.witnesses, _plot_path(out),
                          title=f"{d.label()}")
    _emit(payload, fmt, out, lines)


@main.command()
@_add_options(_dist_options)
@click.option("--window", required=True, help="convex window a,b to probe")
@click.option("--grid", default=129, show_default=True, help="grid points per condition")
@click.option("--tol", default=config.LOGCONC_TOL, show_default=True)
@click.option("--plot", is_flag=True)
@_add_options(_common)
@_guarded
def conditions(dist, pdf_file, pmf_file, window, grid, tol, plot, out, fmt):
    """Log-concavity of the triangle integrals in each endpoint, plus the sign check."""
    d = _load_dist(dist, pdf_file, pmf_file)
    if d.kind == DISCRETE:
        raise DomainError("conditions apply to continuous kinds; embed the pmf first")
    lo, hi = _parse_pair(window, "--window")
    b_grid = np.linspace(lo, hi, grid + 1)[1:]
    a_grid = np.linspace(lo, hi, grid + 1)[:-1]
    in_b = condition_in_b(d, lo, b_grid, tol=tol)
    in_a = condition_in_a(d, a_grid, hi, tol=tol)
    slope = variance_slope_sign_check(d, lo, b_grid, tol=tol)
    payload = {
        "command": "conditions",
        "dist": d.label(),
        "window": [lo, hi],
        "log_concave_in_b": in_b.to_dict(),
        "log_concave_in_a": in_a.to_dict(),
        "slope_sign": slope.to_dict(),
    }
    lines = [
        "claim: triangle integrals of the rebased cdf are log-concave in each endpoint",
        f"  dist: {d.label()}  window: ({lo:g}, {hi:g})  grid: {grid}",
        f"  in upper endpoint: {in_b.verdict}",
        f"  in lower endpoint: {in_a.verdict}",
        f"  variance-slope sign check: {slope.verdict}",
    ]
    for v in (in_b, in_a):
        if v.verdict == "not-log-concave" and v.witness:
            w = v.witness
            lines.append(f"    witness triple ({w.x_minus:.6g}, {w.x_0:.6g}, "
                         f"{w.x_plus:.6g}) deficit {w.second_diff:.3e}")
    if plot:
        from .distributions import cdf as _cdf
        from .plots import save_conditions_figure
        from .quadrature import GridFunction, antiderivative as _anti
        from .truncated import rebased_antiderivatives

        fine = np.unique(np.concatenate([b_grid, a_grid, np.linspace(lo, hi, 513)]))
        _, _, f2 = rebased_antiderivatives(d, lo, fine)
        fb = _cdf(d, hi)
        a1 = _anti(lambda x: fb - _cdf(d, x), lo, fine)
        k1 = GridFunction(fine, a1.ys[-1] - a1.ys, "pchip")
        a2 = _anti(k1, lo, fine)
        k2 = a2.ys[-1] - a2.ys
        save_conditions_figure(b_grid, f2[np.searchsorted(fine, b_grid)],
                               a_grid, k2[np.searchsorted(fine, a_grid)],
                               _plot_path(out), title=d.label())
    _emit(payload, fmt, out, lines)


@main.command()
@click.option("--check", required=True,
              type=click.Choice(["dispersion", "stochastic", "lr-abs", "tp2-g"]))
@click.option("--dist", default=None, help="parent distribution (lr-abs, tp2-g)")
@click.option("--dist-f", default=None, help="first distribution (dispersion, stochastic)")
@click.option("--dist-g", default=None, help="second distribution (dispersion, stochastic)")
@click.option("--truncate-f", default=None, help="truncate first law to a,b before comparing")
@click.option("--truncate-g", default=None, help="truncate second law to a,b before comparing")
@click.option("--a", "a_val", default=None, type=float, help="smaller fold radius (lr-abs)")
@click.option("--b", "b_val", default=None, type=float, help="larger fold radius (lr-abs)")
@click.option("--alphas", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9",
              show_default=True, help="probe probabilities (dispersion)")
@click.option("--x-grid", default=None, help="probe points lo,hi,n (stochastic)")
@click.option("--u-grid", default=None, help="u probes lo,hi,n (tp2-g)")
@click.option("--b-grid", default=None, help="b probes lo,hi,n (tp2-g)")
@click.option("--tol", default=config.ORDER_TOL, show_default=True)
@_add_options(_common)
@_guarded
def orders(check, dist, dist_f, dist_g, truncate_f, truncate_g, a_val, b_val,
           alphas, x_grid, u_grid, b_grid, tol, out, fmt):
    """Stochastic-order checks between distributions or difference kernels."""

    def _spec3(text, name):
        lo, hi, n = (p.strip() for p in text.split(","))
        return np.linspace(float(lo), float(hi), int(n))

    if check in ("dispersion", "stochastic"):
        if not (dist_f and dist_g):
            raise ParseError(f"--check {check} needs --dist-f and --dist-g")
        df = from_string(dist_f)
        dg = from_string(dist_g)
        if truncate_f:
            df = truncated(df, *_parse_pair(truncate_f, "--truncate-f"))
        if truncate_g:
            dg = truncated(dg, *_parse_pair(truncate_g, "--truncate-g"))
        if check == "dispersion":
            result = dispersion_order(df, dg, _parse_floats(alphas, "--alphas"), tol=tol)
        else:
            if not x_grid:
                raise ParseError("--check stochastic needs --x-grid lo,hi,n")
            result = stochastic_order(df, dg, _spec3(x_grid, "--x-grid"), tol=tol)
    elif check == "lr-abs":
        if not (dist and a_val and b_val):
            raise ParseError("--check lr-abs needs --dist, --a and --b")
        if not 0 < a_val < b_val:
            raise DomainError("lr-abs needs 0 < a < b")
        parent = from_string(dist)
        from .distributions import pdf as _pdf
        from .quadrature import GridFunction

        grid_pts = np.linspace(1e-9, b_val * (1 - 1e-12), 513)
        fa = folded_abs(parent, a_val)
        fb = folded_abs(parent, b_val)
        from .orders import likelihood_ratio_order

        result = likelihood_ratio_order(
            GridFunction(grid_pts, _pdf(fb, grid_pts), "linear"),
            GridFunction(grid_pts, _pdf(fa, grid_pts), "linear"),
            tol=max(tol, 1e-9),
        )
    else:  # tp2-g
        if not (dist and u_grid and b_grid):
            raise ParseError("--check tp2-g needs --dist, --u-grid and --b-grid")
        parent = from_string(dist)
        K = g_matrix(parent, _spec3(u_grid, "--u-grid"), _spec3(b_grid, "--b-grid"))
        result = tp2_check(K, tol=max(tol, 1e-9))

    payload = {"command": "orders", "check": check, "result": result.to_dict()}
    lines = [
        f"claim: {result.order} order holds on the probe grid",
        f"  verdict: {result.verdict}  grid: {result.grid_spec}",
    ]
    if result.witness:
        lines.append(f"  witness: {result.witness}")
    _emit(payload, fmt, out, lines)


@main.command()
@_add_options(_dist_options)
@click.option("--b", "b_val", required=True, type=float, help="box upper endpoint")
@click.option("--n-u", default=config.DIFF_GRID_POINTS, show_default=True)
@click.option("--tol", default=config.ORDER_TOL, show_default=True)
@click.option("--plot", is_flag=True)
@_add_options(_common)
@_guarded
def diff(dist, pdf_file, pmf_file, b_val, n_u, tol, plot, out, fmt):
    """Density of the conditioned difference on a symmetric u grid."""
    d = _load_dist(dist, pdf_file, pmf_file)
    dd = diff_density(d, b_val, n_u=n_u)
    mono = g_monotone_check(dd, tol=tol)
    payload = {
        "command": "diff",
        "dist": d.label(),
        "b": b_val,
        "normalization": dd.normalization,
        "n_points": len(dd.u_grid),
        "monotone_on_positive_axis": mono.to_dict(),
    }
    csv_text = "u,g\n" + "\n".join(
        f"{float(u)!r},{float(g)!r}" for u, g in zip(dd.u_grid, dd.g_values)
    ) + "\n"
    lines = [
        f"claim: difference density for {d.label()} on the box (0, {b_val:g})",
        f"  integral of g = {dd.normalization:.12g}",
        f"  nonincreasing for u >= 0: {mono.verdict}",
    ]
    if plot:
        from .plots import save_diff_density_figure

        save_diff_density_figure(dd, _plot_path(out), title=d.label())
    _emit(payload, fmt, out, lines, csv_text=csv_text)


@main.command()
@_add_options(_dist_options)
@click.option("--b-grid", required=True, help="comma list of box sizes")
@click.option("--n-u", default=config.DIFF_GRID_POINTS, show_default=True)
@click.option("--chain", default=None, help="also verify the inequality chain for b1,b2")
@click.option("--tol", default=1e-6, show_default=True)
@click.option("--plot", is_flag=True)
@_add_options(_common)
@_guarded
def entropy(dist, pdf_file, pmf_file, b_grid, n_u, chain, tol, plot, out, fmt):
    """Entropy of the conditioned difference over a grid of box sizes (CSV sweep)."""
    d = _load_dist(dist, pdf_file, pmf_file)
    bs = _parse_floats(b_grid, "--b-grid")
    rows = []
    for b in bs:
        ev = shannon_entropy_of_difference(d, float(b), n_u=n_u)
        rows.append({"b": float(b), "value": ev.value, "error_estimate": ev.error_estimate})
    payload = {"command": "entropy", "dist": d.label(), "rows": rows}
    if chain:
        b1, b2 = _parse_pair(chain, "--chain")
        payload["chain"] = entropy_inequality_chain(d, b1, b2, tol=tol, n_u=n_u).to_dict()
    csv_text = "b,value,error_estimate\n" + "\n".join(
        f"{r['b']!r},{r['value']!r},{r['error_estimate']!r}" for r in rows
    ) + "\n"
    lines = [
        f"claim: difference entropy grows with the box, dist {d.label()}",
        *(f"  b={r['b']:g}: {r['value']:.9g} (est err {r['error_estimate']:.2e})"
          for r in rows),
    ]
    if chain:
        lines.append(f"  inequality chain ({chain}): "
                     + ("all hold" if payload["chain"]["all_hold"] else "violated"))
    if plot:
        from .plots import save_entropy_figure

        save_entropy_figure([r["b"] for r in rows], [r["value"] for r in rows],
                            _plot_path(out), title=d.label())
    _emit(payload, fmt, out, lines, csv_text=csv_text)


@main.command()
@_add_options(_dist_options)
@click.option("--out", default=None, type=click.Path(),
              help="write the embedded density as an x,pdf CSV here")
@click.option("--link", default=None, help="verify the variance link on window a,b")
@click.option("--format", "fmt", default="pretty",
              type=click.Choice(["json", "csv", "pretty"]))
@_guarded
def embed_cmd(dist, pdf_file, pmf_file, out, link, fmt):
    """Embed an integer-valued pmf as a piecewise-uniform continuous density."""
    d = _load_dist(dist, pdf_file, pmf_file)
    if d.kind != DISCRETE:
        raise DomainError("embed expects a discrete distribution")
    table = PmfTable.from_dist(d)
    payload = {
        "command": "embed",
        "n_blocks": int((table.ps > 0).sum()),
        "support": [int(table.ks[0]), int(table.ks[-1])],
        "dropped_tail": table.dropped_tail,
        "link": None,
    }
    if link:
        la, lb = _parse_pair(link, "--link")
        residual = link_check(table, int(la), int(lb))
        xm = table.window_moments(int(la), int(lb))
        payload["link"] = {
            "a": int(la), "b": int(lb), "residual": residual,
            "discrete_variance": xm[2],
            "continuous_variance": xm[2] + 1.0 / 12.0 - residual,
        }
    csv_text = None
    if out:
        # steps exported as near-vertical linear segments (eta-offset knots);
        # contiguous blocks step directly between levels without dipping to 0
        eta = 1e-9
        blocks = [(int(k), float(p)) for k, p in zip(table.ks, table.ps) if p > 0]
        runs: list[list[tuple[int, float]]] = []
        for k, p in blocks:
            if runs and k == runs[-1][-1][0] + 1:
                runs[-1].append((k, p))
            else:
                runs.append([(k, p)])
        pts = []
        for run in runs:
            pts.append((run[0][0] - 0.5 - eta, 0.0))
            for k, p in run:
                pts.append((k - 0.5 + eta, p))
                pts.append((k + 0.5 - eta, p))
            pts.append((run[-1][0] + 0.5 + eta, 0.0))
        csv_text = "x,pdf\n" + "\n".join(f"{x!r},{y!r}" for x, y in pts) + "\n"
        Path(out).write_text(csv_text)
    lines = [
        "claim: unit-block embedding preserves windowed moments up to 1/12",
        f"  blocks: {payload['n_blocks']}  support: {payload['support']}  "
        f"dropped tail: {table.dropped_tail:.3e}",
    ]
    if payload["link"]:
        lines.append(f"  link residual on [{payload['link']['a']}, "
                     f"{payload['link']['b']}]: {payload['link']['residual']:.3e}")
    if fmt == "json":
        reports.validate_report(payload)
        click.echo(reports.dumps(payload), nl=False)
    else:
        click.echo("\n".join(lines))
    if out:
        click.echo(f"wrote {out}")


@main.command()
@click.option("--search", default="default", type=click.Choice(list(SEARCH_PRESETS)),
              show_default=True)
@click.option("--tol", default=config.SWEEP_TOL, show_default=True)
@click.option("--margin", default=1e-3, show_default=True,
              help="oracle-confirmed variance drop required")
@_add_options(_common)
@_guarded
def counterexample(search, tol, margin, out, fmt):
    """Search spike mixtures for a confirmed non-monotone conditional variance."""
    result = search_counterexample(search, tol=tol, margin_required=margin)
    payload = {
        "command": "counterexample",
        "found": result.found,
        "n_candidates_tried": result.n_tried,
        "search": result.search,
        "mixture": None if result.mixture is None else to_dict(result.mixture),
        "oracle_margin": result.oracle_margin,
        "report": None if result.report is None else result.report.to_dict(),
    }
    lines = [
        "claim: a spike mixture with non-monotone conditional variance exists",
        f"  search: {result.search}  candidates tried: {result.n_tried}",
        f"  found: {result.found}",
    ]
    if result.found:
        lines.append(f"  mixture: {result.mixture.label()}")
        lines.append(f"  oracle-confirmed margin: {result.oracle_margin:.6g}")
        w = result.report.witnesses[0]
        lines.append(f"  witness: var({w.a1:g},{w.b1:g})={w.var1:.4f} vs "
                     f"var({w.a2:g},{w.b2:g})={w.var2:.4f}")
    _emit(payload, fmt, out, lines)
    if not result.found:
        sys.exit(EXIT_EXHAUSTED)


main.add_command(embed_cmd, name="embed")


if __name__ == "__main__":
    main()
