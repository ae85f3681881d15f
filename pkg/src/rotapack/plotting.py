"""Matplotlib figures for solutions and batch reports.

Figures are built on :class:`matplotlib.figure.Figure` directly, so nothing
here touches pyplot's global state.
"""

from __future__ import annotations

import io

import matplotlib.patches as mpatches
from matplotlib.figure import Figure

from .harness import BatchReport
from .layout import ProblemInstance
from .solver import Solution


def render_layout(
    solution: Solution,
    instance: ProblemInstance,
    show_border: bool = False,
    show_labels: bool = True,
    title: str | None = None,
) -> Figure:
    """Container, every circle labeled by id, and optionally the border polygon."""
    fig = Figure(figsize=(6, 6))
    ax = fig.add_subplot()
    cx, cy = solution.container_center
    R = solution.radius
    ax.add_patch(mpatches.Circle((cx, cy), R, fill=False, lw=1.5, ec="black", gid="container"))
    for cid, (x, y) in sorted(solution.positions.items()):
        r = instance.radius(cid)
        ax.add_patch(mpatches.Circle((x, y), r, fc="#9ecae1", ec="#08519c", lw=0.8, gid=f"circle-{cid}"))
        if show_labels:
            ax.text(x, y, str(cid), ha="center", va="center", fontsize=max(5, min(10, 120 / (len(solution.positions) + 4))))
    if show_border and len(solution.border) >= 2:
        ring = solution.border
        for a, b in zip(ring, ring[1:] + ring[:1]):
            (xa, ya), (xb, yb) = solution.positions[a], solution.positions[b]
            ax.plot([xa, xb], [ya, yb], color="#d62728", lw=0.8, gid=f"edge-{a}-{b}")
    ax.plot([cx], [cy], marker="+", color="black", ms=8, gid="center")
    pad = 0.05 * R
    ax.set_xlim(cx - R - pad, cx + R + pad)
    ax.set_ylim(cy - R - pad, cy + R + pad)
    ax.set_aspect("equal")
    ax.set_title(title or f"n={len(solution.positions)}  r={solution.radius:.4f}  f2={solution.f2:.1e}")
    return fig


def render_svg(solution: Solution, instance: ProblemInstance, show_border: bool = False) -> str:
    buf = io.StringIO()
    render_layout(solution, instance, show_border=show_border).savefig(buf, format="svg")
    return buf.getvalue()


def plot_run_distribution(report: BatchReport) -> Figure:
    """Histogram of container radii over the successful runs of a batch."""
    vals = [r.f1 for r in report.per_run if r.ok]
    fig = Figure(figsize=(6, 4))
    ax = fig.add_subplot()
    ax.hist(vals, bins=min(50, max(5, len(vals) // 20)), color="#6baed6", ec="white")
    ax.axvline(report.best.f1, color="#d62728", lw=1.2, label=f"best {report.best.f1:.4f}")
    ax.set_xlabel("container radius")
    ax.set_ylabel("runs")
    ax.set_title(f"{report.instance_name or 'instance'}: {len(vals)} runs, b={report.b}")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def save_figure(fig: Figure, path) -> None:
    fig.savefig(path)
