"""Matplotlib rendering for the report path.

Every figure is written straight to a file next to the CSV it mirrors; no
interactive backends, no display. Input rows are the aggregated sweep cells
as produced by the harness: dicts with encoding, entanglement, width, depth,
mean/std accuracy.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

_MARKERS = ["o", "s", "^", "D", "v", "P", "*", "X"]


def _series_plot(ax, rows, x_key, series_key):
    series_values = sorted({row[series_key] for row in rows})
    for i, sval in enumerate(series_values):
        pts = sorted((r[x_key], r["mean_accuracy"], r["std_accuracy"])
                     for r in rows if r[series_key] == sval)
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        errs = [p[2] for p in pts]
        ax.errorbar(xs, ys, yerr=errs, marker=_MARKERS[i % len(_MARKERS)],
                    capsize=3, label=f"{series_key}={sval}")
    ax.set_xticks(sorted({row[x_key] for row in rows}))
    ax.set_ylim(0.0, 1.0)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)


def accuracy_trend_figure(rows: list[dict], x_key: str, series_key: str,
                          title: str, path: str) -> str:
    """Mean test accuracy against width or depth, one line per fixed value."""
    fig, ax = plt.subplots(figsize=(6, 4))
    _series_plot(ax, rows, x_key, series_key)
    ax.set_xlabel("qubits" if x_key == "width" else "layer repetitions")
    ax.set_ylabel("mean test accuracy")
    ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def entanglement_delta_figure(rows: list[dict], title: str, path: str) -> str:
    """Signed accuracy gap (ring minus none) per (width, depth) cell."""
    fig, ax = plt.subplots(figsize=(6, 4))
    widths = sorted({row["width"] for row in rows})
    for i, width in enumerate(widths):
        pts = sorted((r["depth"], r["delta"]) for r in rows if r["width"] == width)
        ax.plot([p[0] for p in pts], [p[1] for p in pts],
                marker=_MARKERS[i % len(_MARKERS)], label=f"width={width}")
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("layer repetitions")
    ax.set_ylabel("accuracy delta (ring - none)")
    ax.set_title(title, fontsize=10)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def variance_scan_figure(points, path: str) -> str:
    """Gradient variance against width on a log scale, one line per depth."""
    fig, ax = plt.subplots(figsize=(6, 4))
    depths = sorted({p.depth for p in points})
    for i, depth in enumerate(depths):
        sub = sorted((p.width, p.variance) for p in points if p.depth == depth)
        ax.semilogy([s[0] for s in sub], [s[1] for s in sub],
                    marker=_MARKERS[i % len(_MARKERS)], label=f"depth={depth}")
    ax.set_xlabel("qubits")
    ax.set_ylabel("gradient variance")
    ax.set_xticks(sorted({p.width for p in points}))
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
