"""Matplotlib figure rendering for selection reports and metric tables.

All functions write PNG files and return the written path; callers decide
where figures live (typically next to the delimited output).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _save(fig, path) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return str(path)


def plot_neighbor_cosine_hist(cosines_by_label: dict[str, list[float]],
                              path) -> str:
    """Overlaid histograms of consecutive-frame cosine similarity."""
    fig, ax = plt.subplots(figsize=(6, 4))
    bins = np.linspace(-1.0, 1.0, 41)
    for label, cosines in cosines_by_label.items():
        if cosines:
            ax.hist(cosines, bins=bins, alpha=0.55, label=label)
    ax.set_xlabel("cosine similarity of consecutive selected frames")
    ax.set_ylabel("count")
    ax.legend()
    return _save(fig, path)


def plot_volume_growth(steps: list[dict], path) -> str:
    """Log-volume after each greedy append."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if steps:
        ax.plot(range(1, len(steps) + 1),
                [s["log_volume"] for s in steps], marker="o")
    ax.set_xlabel("append step")
    ax.set_ylabel("log volume of selected submatrix")
    return _save(fig, path)


def plot_selection_timeline(n: int, indices_by_label: dict[str, list[int]],
                            path) -> str:
    """Which frames each strategy keeps, on a shared time axis."""
    fig, ax = plt.subplots(figsize=(8, 0.6 * max(len(indices_by_label), 2) + 1))
    labels = list(indices_by_label)
    for y, label in enumerate(labels):
        idx = indices_by_label[label]
        ax.scatter(idx, [y] * len(idx), marker="|", s=200)
    ax.set_yticks(range(len(labels)), labels)
    ax.set_xlim(-1, n)
    ax.set_xlabel("frame index")
    return _save(fig, path)


def plot_bench(rows: list[dict], path) -> str:
    """Median and p95 selection times per benchmark case."""
    fig, ax = plt.subplots(figsize=(6, 4))
    names = [r["case"] for r in rows]
    x = np.arange(len(names))
    ax.bar(x - 0.2, [r["median_ms"] for r in rows], width=0.4, label="median")
    ax.bar(x + 0.2, [r["p95_ms"] for r in rows], width=0.4, label="p95")
    ax.set_xticks(x, names, rotation=20)
    ax.set_ylabel("time (ms)")
    ax.legend()
    return _save(fig, path)
