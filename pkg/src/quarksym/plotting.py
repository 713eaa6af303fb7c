"""Figures written next to the CLI's CSV reports (Agg backend, no display)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .sl3core import weyl_x  # noqa: E402

__all__ = [
    "defect_figure",
    "cutoff_figure",
    "charnum_figure",
    "arc_figure",
]

STYLE = {
    "font.size": 8,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.0,
    "lines.markersize": 3,
    "figure.dpi": 150,
}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return path


def _reference_line(ax, s, anchor, slope=-1.0):
    s = np.asarray(s, dtype=float)
    ax.plot(s, anchor * (s / s[0]) ** slope, "k:", label=f"slope {slope:g}")


def defect_figure(path, s_values, curves: dict, title: str = "", ylabel: str = "sup defect"):
    """Log-log defect curves against ``s`` with a slope -1 guide.

    Curves that are identically zero are skipped since they have no log.
    """
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.0, 3.0))
        anchor = None
        for label, vals in curves.items():
            vals = np.asarray(vals, dtype=float)
            if not np.all(vals > 0):
                continue
            ax.loglog(s_values, vals, "o-", label=label)
            anchor = vals[0] if anchor is None else max(anchor, vals[0])
        if anchor is not None:
            _reference_line(ax, s_values, anchor)
        ax.set_xlabel("s")
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.legend(loc="best")
        return _save(fig, path)


def cutoff_figure(path, profile, s: int, title: str = ""):
    """Max defect at fixed ``s`` against the squared-radius cutoff."""
    r_sq = [float(c) for c, _ in profile]
    vals = [v for _, v in profile]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.0, 3.0))
        ax.plot(r_sq, vals, "o-")
        ax.set_xlabel("squared radius cutoff")
        ax.set_ylabel(f"max defect at s = {s}")
        ax.set_title(title)
        return _save(fig, path)


def charnum_figure(path, rows):
    """``p (b - 1)`` against ``p`` for each ``n`` with its limit as a dashed line."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.0, 3.0))
        for row in rows:
            if row["n"] == 0:
                continue
            ps = [c["p"] for c in row["columns"]]
            ax.semilogx(ps, [c["scaled"] for c in row["columns"]], "o-", label=f"n = {row['n']}")
            ax.axhline(row["limit"], color="0.6", ls="--", lw=0.7)
        ax.set_xlabel("p")
        ax.set_ylabel("p (b - 1)")
        ax.legend(loc="best")
        return _save(fig, path)


def arc_figure(path, points, title: str = ""):
    """Orbit representatives as points on the Weyl arc ``(x(y), y)``."""
    ys = np.linspace(0.0, 1.0, 200)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(3.2, 3.2))
        ax.plot([weyl_x(y) for y in ys], ys, color="0.7")
        if points:
            xs, yp = zip(*points)
            ax.plot(xs, yp, "o")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_aspect("equal")
        ax.set_title(title)
        return _save(fig, path)
