"""Figure rendering for the report path.

Each function writes one PNG next to the delimited output.  Figures are
diagnostic companions to the CSV/JSON reports, never a replacement: the
machine-readable files remain the contract.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_sweep_figure",
    "save_entropy_figure",
    "save_diff_density_figure",
    "save_conditions_figure",
]

_DPI = 130


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_sweep_figure(details, witnesses, path, title: str = "") -> None:
    """Conditional variance vs upper endpoint, one curve per lower endpoint."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    a_vals = details.a_values
    step = max(1, len(a_vals) // 6)
    for i in range(0, len(a_vals), step):
        row = details.variances[i]
        mask = ~np.isnan(row)
        if mask.sum() < 2:
            continue
        ax.plot(details.b_values[mask], row[mask], lw=1.2,
                label=f"a = {a_vals[i]:.3g}")
    for w in witnesses[:40]:
        ax.plot([w.b1, w.b2], [w.var1, w.var2], color="crimson", lw=2.0, zorder=5)
    ax.set_xlabel("upper endpoint b")
    ax.set_ylabel("var(X | a < X < b)")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8, loc="best")
    ax.grid(alpha=0.3)
    _finish(fig, path)


def save_entropy_figure(bs, values, path, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(bs, values, marker="o", ms=4, lw=1.3)
    ax.set_xlabel("box size b")
    ax.set_ylabel("entropy of the conditioned difference (nats)")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    _finish(fig, path)


def save_diff_density_figure(dd, path, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.fill_between(dd.u_grid, dd.g_values, alpha=0.25)
    ax.plot(dd.u_grid, dd.g_values, lw=1.4)
    ax.set_xlabel("u")
    ax.set_ylabel(f"g(u; b = {dd.b:g})")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    _finish(fig, path)


def save_conditions_figure(b_grid, g_in_b, a_grid, g_in_a, path,
                           title: str = "") -> None:
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    with np.errstate(divide="ignore"):
        axes[0].plot(b_grid, np.log(np.maximum(g_in_b, 1e-300)), lw=1.3)
        axes[1].plot(a_grid, np.log(np.maximum(g_in_a, 1e-300)), lw=1.3)
    axes[0].set_xlabel("upper endpoint b")
    axes[0].set_ylabel("log triangle integral")
    axes[1].set_xlabel("lower endpoint a")
    axes[1].set_ylabel("log mirrored triangle integral")
    for ax in axes:
        ax.grid(alpha=0.3)
    if title:
        fig.suptitle(title)
    _finish(fig, path)
