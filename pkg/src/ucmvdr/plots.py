"""Static SVG figures (zero plots, beampatterns, ECDFs, WNG histograms)."""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .metrics import to_db  # noqa: E402

# fixed ids and no timestamp so identical data gives identical files
plt.rcParams["svg.hashsalt"] = "ucmvdr"
_META = {"Date": None, "Creator": "ucmvdr"}

COLORS = {
    "SMI": "tab:blue", "UC": "m", "DL-matched": "tab:green", "DL-fixed": "tab:olive",
    "DL-oracle": "tab:red", "CBF": "k", "MVDR": "tab:gray",
}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata=_META)
    plt.close(fig)
    return path


def zero_plot(path, zero_sets: dict, reference_angles=(), title=""):
    """Zeros on the complex plane with the unit circle; ``zero_sets`` maps label -> complex array."""
    fig, ax = plt.subplots(figsize=(5, 5))
    t = np.linspace(0, 2 * np.pi, 721)
    ax.plot(np.cos(t), np.sin(t), "k-", lw=0.8)
    for a in reference_angles:
        ax.plot([0, 1.3 * np.cos(a)], [0, 1.3 * np.sin(a)], "k--", lw=0.8)
    markers = iter(["o", "D", "s", "^", "v", "x", "."])
    for label, z in zero_sets.items():
        z = np.asarray(z)
        small = z.size > 200
        ax.plot(z.real, z.imag, "." if small else next(markers), ms=2 if small else 6,
                mfc="none", color=COLORS.get(label), label=label, ls="none")
    ax.axhline(0, color="0.8", lw=0.5)
    ax.axvline(0, color="0.8", lw=0.5)
    ax.set_aspect("equal")
    ax.set_xlabel("Re(z)")
    ax.set_ylabel("Im(z)")
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    return _save(fig, path)


def beampattern_plot(path, grid, patterns: dict, markers=(), title="", floor_db=-80.0):
    fig, ax = plt.subplots(figsize=(7, 4))
    for label, b in patterns.items():
        ax.plot(grid, np.maximum(to_db(np.abs(b) ** 2), floor_db), color=COLORS.get(label), label=label, lw=1)
    for u in markers:
        ax.axvline(u, color="k", ls="--", lw=0.8)
    ax.set_xlim(-1, 1)
    ax.set_ylim(floor_db, 5)
    ax.set_xlabel("u = cos(theta)")
    ax.set_ylabel("|B(u)|^2 (dB)")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    return _save(fig, path)


def ecdf_plot(path, curves: dict, reference=None, title=""):
    """``curves`` maps label -> EcdfCurve of interferer power (linear)."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for label, c in curves.items():
        ax.step(to_db(c.values), c.probabilities, where="post", color=COLORS.get(label), label=label)
    if reference is not None:
        ax.axvline(to_db(reference), color="k", ls="--", lw=0.8, label="ensemble MVDR")
    ax.set_xlabel("interferer output power P_I (dB)")
    ax.set_ylabel("ECDF")
    ax.set_ylim(0, 1.02)
    ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    return _save(fig, path)


def wng_histogram(path, samples: dict, n_sensors: int, reference=None, title=""):
    fig, ax = plt.subplots(figsize=(7, 4))
    bins = np.linspace(0, n_sensors, 45)
    for label, x in samples.items():
        ax.hist(x, bins=bins, alpha=0.5, color=COLORS.get(label), label=label)
    if reference is not None:
        ax.axvline(reference, color="k", ls="--", lw=0.8, label="ensemble MVDR")
    ax.set_xlabel("WNG")
    ax.set_ylabel("count")
    ax.set_title(title)
    ax.legend(fontsize=8)
    return _save(fig, path)


def wng_scatter(path, x, y, n_sensors: int, xlabel="SMI WNG", ylabel="UC WNG", title=""):
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(x, y, ".", ms=2, color="m")
    ax.plot([0, n_sensors], [0, n_sensors], "k--", lw=0.8)
    ax.set_xlim(0, n_sensors)
    ax.set_ylim(0, n_sensors)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.set_aspect("equal")
    return _save(fig, path)


def sweep_plot(path, xs, series: dict, xlabel, ylabel="mean P_I (dB)", reference=None, title=""):
    fig, ax = plt.subplots(figsize=(7, 4))
    for label, ys in series.items():
        ax.plot(xs, to_db(ys), "o-", color=COLORS.get(label), label=label)
    if reference is not None:
        ax.plot(xs, to_db(reference), "k-", lw=0.8, label="ensemble MVDR")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    return _save(fig, path)
