"""Zero-scatter figures rendered with matplotlib.

Output is SVG 1.1 with a pinned hash salt and no date metadata, so a
given report always renders to identical bytes.
"""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_SVG_SALT = "zerodist"


def zero_scatter_figure(roots: list[dict], title: str) -> "plt.Figure":
    """Unit circle, axes, and one marker per root at (rho cos t, rho sin t)."""
    if not roots:
        raise ValueError("report contains no roots to plot")
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    circle_t = np.linspace(0.0, 2.0 * math.pi, 720)
    ax.plot(np.cos(circle_t), np.sin(circle_t), linestyle="--", linewidth=0.8,
            color="0.55", zorder=1)
    ax.axhline(0.0, linewidth=0.6, color="0.8", zorder=0)
    ax.axvline(0.0, linewidth=0.6, color="0.8", zorder=0)
    xs, ys = [], []
    for row in roots:
        rho, theta, mult = row["rho"], row["theta"], int(row["multiplicity"])
        xs.extend([rho * math.cos(theta)] * mult)
        ys.extend([rho * math.sin(theta)] * mult)
    ax.plot(xs, ys, ".", markersize=3.0, color="tab:blue", zorder=2)
    lim = max(1.3, 1.05 * max(abs(v) for v in xs + ys))
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_aspect("equal")
    ax.set_title(title)
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    return fig


def save_zero_scatter(roots: list[dict], title: str, path: str) -> None:
    """Render the scatter to an SVG file with deterministic bytes."""
    with plt.rc_context({"svg.hashsalt": _SVG_SALT}):
        fig = zero_scatter_figure(roots, title)
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
