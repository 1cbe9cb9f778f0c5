"""Matplotlib rendering of sweep results and bound tables.

The reproduce command writes one PNG next to each CSV; the CSV stays the data
contract and the figure is a convenience view of the same rows.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .experiment import BoundTable, SweepResult  # noqa: E402

_X_LABELS = {"m_S": "real sample size", "d": "data dimension", "gamma": "augmentation ratio"}


def _new_axes():
    fig, ax = plt.subplots(figsize=(5.2, 3.4), dpi=150)
    ax.grid(alpha=0.3)
    return fig, ax


def render_sweep_figure(result: SweepResult, x_axis: str, path: Union[str, Path]) -> Path:
    """Plot mean generalization gap with standard-error bars.

    ``x_axis`` picks the sweep variable: "m_S", "d", or "gamma".  With "m_S"
    or "d" on the x axis, one curve is drawn per gamma value.
    """
    if x_axis not in _X_LABELS:
        raise ValueError(f"x_axis must be one of {sorted(_X_LABELS)}, got {x_axis!r}")
    rows = sorted(result.rows, key=lambda r: (r.dim, r.real_count, r.gamma))
    fig, ax = _new_axes()
    if x_axis == "gamma":
        xs = [float(r.gamma) for r in rows]
        ax.errorbar(
            xs,
            [r.mean_gen_error for r in rows],
            yerr=[r.std_error for r in rows],
            marker="o",
            capsize=2,
        )
    else:
        attr = "real_count" if x_axis == "m_S" else "dim"
        for gamma in sorted({r.gamma for r in rows}):
            subset = [r for r in rows if r.gamma == gamma]
            ax.errorbar(
                [getattr(r, attr) for r in subset],
                [r.mean_gen_error for r in subset],
                yerr=[r.std_error for r in subset],
                marker="o",
                capsize=2,
                label=f"gamma={float(gamma):g}",
            )
        ax.legend(fontsize=8)
    ax.set_xlabel(_X_LABELS[x_axis])
    ax.set_ylabel(f"mean generalization gap ({result.loss.value})")
    fig.tight_layout()
    target = Path(path)
    fig.savefig(target)
    plt.close(fig)
    return target


def render_bound_figure(table: BoundTable, path: Union[str, Path]) -> Path:
    """Plot the bound total and its three parts against the augmentation ratio."""
    rows = sorted(table.rows, key=lambda r: (r.dim, r.real_count, r.gamma))
    xs = [float(r.gamma) for r in rows]
    fig, ax = _new_axes()
    ax.plot(xs, [r.breakdown.total for r in rows], marker="o", label="total")
    ax.plot(xs, [r.breakdown.divergence_term for r in rows], "--", label="divergence")
    ax.plot(xs, [r.breakdown.sqrt_term for r in rows], "--", label="sqrt part")
    ax.plot(xs, [r.breakdown.log_term for r in rows], "--", label="log part")
    ax.legend(fontsize=8)
    ax.set_xlabel(_X_LABELS["gamma"])
    ax.set_ylabel(f"bound value ({table.mode.value})")
    fig.tight_layout()
    target = Path(path)
    fig.savefig(target)
    plt.close(fig)
    return target
