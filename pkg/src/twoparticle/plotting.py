"""Figures written next to the delimited reports (same stem, .png)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams.update({
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 100,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
    # fixed metadata so repeated runs give identical files
    "svg.hashsalt": "twoparticle",
})

_META = {"Software": None}


def figure_path(report_path) -> Path:
    return Path(report_path).with_suffix(".png")


def _save(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return path


def plot_pattern(pattern, path, title: str = "") -> Path:
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(6.0, 5.0))
    ax1.plot(pattern.separations, pattern.densities, color="k", lw=1)
    ax1.set_ylabel("coincidence density")
    ax2.plot(pattern.separations, pattern.corrected, color="C0", lw=1)
    ax2.axhline(1.0, color="0.5", lw=0.5)
    ax2.set_ylabel("corrected")
    ax2.set_xlabel(r"detector separation $x_1 - x_2$")
    if title:
        ax1.set_title(title)
    return _save(fig, path)


def plot_duality(records, path) -> Path:
    s = np.array([r.overlap_modulus for r in records])
    fig, ax = plt.subplots()
    ax.plot(s, [r.D for r in records], "o-", ms=3, label=r"$\mathcal{D}$")
    ax.plot(s, [r.V for r in records], "s-", ms=3, label=r"$\mathcal{V}$")
    ax.plot(s, [r.sum for r in records], "k--", lw=1, label=r"$\mathcal{D}+\mathcal{V}$")
    errs = [r.std_error for r in records]
    if any(errs):
        ax.errorbar(s, [r.V for r in records], yerr=errs, fmt="none", ecolor="C1", capsize=2)
    ax.set_xlabel(r"$|\langle d_A|d_B\rangle|$")
    ax.set_ylim(-0.05, 1.1)
    ax.legend(frameon=False)
    ax.set_title(records[0].experiment.value if records else "")
    return _save(fig, path)


def plot_delay_scan(rows, path) -> Path:
    tau, pc = zip(*rows)
    fig, ax = plt.subplots()
    ax.plot(tau, pc, color="k", lw=1)
    ax.set_xlabel(r"delay $\tau$")
    ax.set_ylabel(r"$P_C$")
    ax.set_ylim(-0.02, 1.02 if max(pc) > 0.5 + 1e-12 else 0.52)
    return _save(fig, path)


def plot_histogram(estimate, path) -> Path:
    edges = estimate.bin_edges
    fig, ax = plt.subplots()
    ax.stairs(estimate.counts, edges, color="k")
    ax.set_xlabel(r"$x_1 - x_2$")
    ax.set_ylabel("events per bin")
    ax.set_title(f"V = {estimate.visibility:.4f} ± {estimate.std_error:.4f}")
    return _save(fig, path)


def plot_hom_counts(labels, counts, path) -> Path:
    fig, ax = plt.subplots()
    ax.bar(labels, counts, color=["C3", "C0", "C0"])
    ax.set_ylabel("events")
    return _save(fig, path)
