"""Static figures for the table and search reports.

Figures are drawn on :class:`matplotlib.figure.Figure` with the Agg canvas,
so no display or pyplot state is involved.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .bounds import (
    GENERAL_THRESHOLD,
    PLANAR_THRESHOLD,
    planar_cost_bounds,
    planar_cost_from_closed_form,
    planar_radius_upper,
)

DPI = 150


def _save(fig: Figure, path) -> Path:
    path = Path(path)
    FigureCanvasAgg(fig)
    fig.savefig(path, dpi=DPI, bbox_inches="tight")
    return path


def _series(rows, column):
    pts = [(r.n, getattr(r, column)) for r in rows if getattr(r, column) is not None]
    return np.array(pts, dtype=float).reshape(-1, 2)


def plot_table2(rows, path) -> Path:
    """Radii against outcome count for every column of the outcome-count table, with the analytic caps."""
    fig = Figure(figsize=(6.4, 4.2))
    ax = fig.add_subplot()
    styles = {
        "planar_symmetric": ("o-", "planar, rotationally symmetric"),
        "planar_numeric": ("s--", "planar, search"),
        "thomson": ("^-", "general, Thomson"),
        "general_numeric": ("d--", "general, search"),
    }
    for col, (fmt, label) in styles.items():
        pts = _series(rows, col)
        if len(pts):
            ax.plot(pts[:, 0], pts[:, 1], fmt, label=label, ms=4)
    ns = np.array(sorted({r.n for r in rows if r.n >= 3}))
    if len(ns):
        ax.plot(ns, [planar_radius_upper(int(n)) for n in ns], ":", color="0.4", label="planar cap")
    ax.axhline(PLANAR_THRESHOLD, color="0.6", lw=0.8, ls="-.", label="2/pi")
    ax.axhline(GENERAL_THRESHOLD, color="0.6", lw=0.8, ls="--", label="1/2")
    ax.set_xlabel("outcomes n")
    ax.set_ylabel("compatibility radius")
    ax.legend(fontsize=7, loc="lower right")
    return _save(fig, path)


def plot_platonic(rows, path) -> Path:
    fig = Figure(figsize=(5.6, 3.6))
    ax = fig.add_subplot()
    x = np.arange(len(rows))
    ax.bar(x - 0.2, [r.computed for r in rows], 0.4, label="computed")
    ax.bar(x + 0.2, [r.reference for r in rows], 0.4, label="printed")
    ax.set_xticks(x, [f"{r.kind}\n({r.n})" for r in rows], fontsize=7)
    ax.set_ylabel("compatibility radius")
    ax.legend(fontsize=7)
    return _save(fig, path)


def plot_cost_bounds(path, r_min: float = 0.5, r_max: float = 0.636, points: int = 400) -> Path:
    """Planar outcome count from the closed form between the two analytic cost bounds."""
    r = np.linspace(r_min, r_max, points)
    lo, hi = np.array([planar_cost_bounds(v) for v in r]).T
    N = [planar_cost_from_closed_form(v) for v in r]
    fig = Figure(figsize=(5.6, 3.6))
    ax = fig.add_subplot()
    ax.plot(r, lo, label="lower bound")
    ax.plot(r, hi, label="upper bound")
    ax.step(r, N, where="post", label="closed-form count")
    ax.set_yscale("log")
    ax.set_xlabel("singlet weight r")
    ax.set_ylabel("outcomes")
    ax.legend(fontsize=7)
    return _save(fig, path)


def plot_history(history, path, cap: float | None = None) -> Path:
    h = np.asarray(history, dtype=float).reshape(-1, 2)
    fig = Figure(figsize=(5.6, 3.6))
    ax = fig.add_subplot()
    ax.plot(h[:, 0], h[:, 1])
    if cap is not None:
        ax.axhline(cap, color="0.5", ls=":", label="cap")
        ax.legend(fontsize=7)
    ax.set_xlabel("refinement round")
    ax.set_ylabel("best radius")
    return _save(fig, path)
