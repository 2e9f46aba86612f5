"""Figure rendering for the report path: lifting-relation curves, lifted
space curves and verification summaries, written as PNG files next to the
delimited output."""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from . import curvelift  # noqa: E402


def plot_relation(shape: str, params: dict, path: str, n: int = 400) -> str:
    """z against plane length l for one lifting relation."""
    rel = curvelift.RELATIONS[shape]
    zlo, zhi = rel.z_range(params)
    lo = zlo if math.isfinite(zlo) else -3.0
    hi = zhi if math.isfinite(zhi) else 3.0
    zs, ls = [], []
    for i in range(1, n):
        z = lo + (hi - lo) * i / n
        try:
            g = rel.G(z, params)
        except (curvelift.DomainError, ValueError, OverflowError):
            continue
        zs.append(z)
        ls.append(g / rel.c(params) if rel.c(params) else 0.0)
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    ax.plot(ls, zs, lw=1.5)
    ax.set_xlabel("plane length l")
    ax.set_ylabel("lift z")
    ax.set_title(f"lifting relation, {shape} shape")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_lifted_curve(rows, path: str, title: str = "lifted curve") -> str:
    """3-D rendering of (x, y, z) samples from lift_curve."""
    xs = [r[1] for r in rows]
    ys = [r[2] for r in rows]
    zs = [r[3] for r in rows]
    fig = plt.figure(figsize=(4.6, 3.8))
    ax = fig.add_subplot(projection="3d")
    ax.plot(xs, ys, zs, lw=1.5)
    ax.plot(xs, ys, [0.0] * len(xs), lw=0.8, color="gray", alpha=0.7)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_report_summary(report, path: str) -> str:
    """Residual profile of a verification run, one marker per check."""
    checks = report.checks
    kinds = sorted({c["kind"] for c in checks})
    kind_ix = {k: i for i, k in enumerate(kinds)}
    xs, ys, colors = [], [], []
    floor = 1e-18
    for c in checks:
        xs.append(kind_ix[c["kind"]])
        ys.append(max(abs(c["residual"]), floor))
        ok = c["verdict"] in ("ProvenZero", "NumericallyZero", "NoState")
        colors.append("tab:blue" if ok else "tab:red")
    fig, ax = plt.subplots(figsize=(max(6.0, 0.62 * len(kinds)), 3.6))
    ax.scatter(xs, ys, c=colors, s=14, alpha=0.75)
    ax.axhline(1e-9, color="k", lw=0.8, ls="--", label="zero tolerance")
    ax.set_yscale("log")
    ax.set_ylim(floor / 2, 10)
    ax.set_xticks(range(len(kinds)))
    ax.set_xticklabels(kinds, rotation=45, ha="right", fontsize=7)
    ax.set_ylabel("residual")
    s = report.summary
    ax.set_title(f"verification residuals: {s['pass']} pass, "
                 f"{s['fail']} fail, {s['inconclusive']} inconclusive")
    ax.legend(loc="upper right", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
