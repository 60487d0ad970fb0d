"""Figures for the CLI reports.

Every figure is backed by a CSV written next to it; each also gets a small
gnuplot script so the plot can be regenerated without Python. matplotlib is
imported lazily so the numerical modules never depend on it.
"""

import contextlib
import math
import os

import numpy as np

from dcl.io import atomic_write, write_text

FIG_WIDTH = 6.0
GOLDEN = (math.sqrt(5) - 1.0) / 2.0

RC = {
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "legend.frameon": False,
    "lines.linewidth": 1.4,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "svg.hashsalt": "dcl",
}


@contextlib.contextmanager
def _figure(width=FIG_WIDTH, height=None, ncols=1):
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    with matplotlib.rc_context(RC):
        fig, axes = plt.subplots(1, ncols, figsize=(width, height or width * GOLDEN))
        try:
            yield fig, axes
        finally:
            plt.close(fig)


def _save(fig, path):
    fig.tight_layout()
    with atomic_write(path, "wb") as fh:
        fig.savefig(fh, format="png", metadata={"Software": None})
    return path


def write_gnuplot(path, csv_name, png_name, title, xlabel, ylabel, series):
    """Write a gnuplot script plotting columns of ``csv_name``.

    ``series`` is a list of (x column, y column, title, style) with 1-based columns.
    """
    plots = ", \\\n     ".join(
        f"'{csv_name}' using {x}:{y} with {style} title '{label}'" for x, y, label, style in series
    )
    text = (
        "set datafile separator ','\n"
        "set key top left\n"
        "set terminal pngcairo size 900,560\n"
        f"set output '{os.path.splitext(png_name)[0]}_gnuplot.png'\n"
        f"set title '{title}'\n"
        f"set xlabel '{xlabel}'\n"
        f"set ylabel '{ylabel}'\n"
        f"plot {plots}\n"
    )
    write_text(path, text)
    return path


def stiffness_figure(path, theta_deg, torque, fit_deg, fit_torque, operating_max_deg, safety_max_deg):
    """Torque-angle data with the fitted cubic and the region shading."""
    with _figure() as (fig, ax):
        top = max(np.max(torque), np.max(fit_torque)) * 1.1
        ax.axvspan(operating_max_deg, safety_max_deg, color="tab:blue", alpha=0.12, label="safety margin")
        ax.axvspan(safety_max_deg, max(np.max(theta_deg), safety_max_deg) + 1, color="tab:red", alpha=0.10,
                   label="densification")
        ax.axvline(safety_max_deg, color="tab:red", lw=1.0)
        ax.plot(theta_deg, torque, "o", ms=3, mfc="none", color="tab:blue", label="characterization data")
        ax.plot(fit_deg, fit_torque, "-", color="tab:red", label="cubic fit (operating region)")
        ax.set_xlim(0, max(np.max(theta_deg), safety_max_deg) + 1)
        ax.set_ylim(0, top)
        ax.set_xlabel("compression angle (deg)")
        ax.set_ylabel("torque (N m)")
        ax.legend(loc="upper left")
        return _save(fig, path)


def trajectory_figure(path, runs):
    """Height and knee torque against time for one or more jumps.

    ``runs`` maps a label to a trajectory dict from :class:`~dcl.dynamics.JumpResult`.
    """
    with _figure(height=FIG_WIDTH * 0.45, ncols=2) as (fig, (ax_z, ax_t)):
        for label, tr in runs.items():
            t_ms = np.asarray(tr["t"]) * 1e3
            (line,) = ax_z.plot(t_ms, np.asarray(tr["z"]) * 1e3, label=label)
            ax_t.plot(t_ms, tr["tau_motor"], color=line.get_color(), label=f"{label} motor")
            if np.any(np.asarray(tr["tau_exo"]) > 0):
                ax_t.plot(t_ms, tr["tau_exo"], "--", color=line.get_color(), label=f"{label} module")
        ax_z.set_xlabel("time (ms)")
        ax_z.set_ylabel("hip height (mm)")
        ax_t.set_xlabel("time (ms)")
        ax_t.set_ylabel("knee torque per leg (N m)")
        ax_z.legend()
        ax_t.legend()
        return _save(fig, path)


def table1_figure(path, rows, band=None):
    """Bar chart of effective jump height per group with relative change labels."""
    with _figure(width=4.5, height=3.4) as (fig, ax):
        names = [r["group"] for r in rows]
        vals = [r["eff_jump_height_mm"] for r in rows]
        colors = ["0.55", "0.75", "tab:red"][: len(rows)]
        bars = ax.bar(names, vals, color=colors, width=0.6)
        for bar, r in zip(bars, rows):
            pct = r.get("relative_change_pct")
            label = f"{bar.get_height():.1f}" + ("" if pct is None else f"\n({pct:+.1f}%)")
            ax.annotate(label, (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                        ha="center", va="bottom", fontsize=8, xytext=(0, 2), textcoords="offset points")
        if band is not None and rows:
            base = rows[0]["eff_jump_height_mm"]
            lo, hi = (base * (1 + b / 100.0) for b in band)
            ax.axhspan(lo, hi, color="tab:green", alpha=0.12, label=f"band {band[0]:+.0f}%..{band[1]:+.0f}%")
            ax.legend(loc="lower right")
        ax.set_ylabel("effective jump height (mm)")
        ax.set_ylim(0, max(vals) * 1.25)
        return _save(fig, path)


def mechanism_figure(path, rows):
    arr = np.asarray(rows, dtype=float)
    with _figure(height=FIG_WIDTH * 0.45, ncols=2) as (fig, (ax_u, ax_f)):
        ax_u.plot(arr[:, 0], arr[:, 2])
        ax_u.set_xlabel("push-rod travel (mm)")
        ax_u.set_ylabel("potential energy (mJ)")
        ax_f.plot(arr[:, 0], arr[:, 3], color="tab:orange")
        ax_f.axhline(0.0, color="0.6", lw=0.8)
        ax_f.set_xlabel("push-rod travel (mm)")
        ax_f.set_ylabel("holding force (N)")
        return _save(fig, path)
