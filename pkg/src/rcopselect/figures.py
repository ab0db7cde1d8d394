"""Figure rendering for command-line reports.

Every report that writes delimited output also renders the matching figures
here: heat maps of matrices and colorings, posterior bars, and chain
diagnostics.  All functions write image files and return the path.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def heatmap(m: np.ndarray, path, title: str | None = None, cmap: str = "viridis"):
    m = np.asarray(m, dtype=float)
    fig, ax = plt.subplots(figsize=(4.8, 4.2))
    im = ax.imshow(m, cmap=cmap)
    fig.colorbar(im, ax=ax, fraction=0.046)
    if title:
        ax.set_title(title)
    ax.set_xticks([])
    ax.set_yticks([])
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return Path(path)


def coloring_map(grid: np.ndarray, path, title: str | None = None):
    """Heat map of a coloring's class-index grid."""
    return heatmap(grid, path, title=title, cmap="tab20")


def posterior_bars(labels, probabilities, path, title: str | None = None, top: int = 10):
    k = min(top, len(labels))
    fig, ax = plt.subplots(figsize=(6.4, 0.45 * k + 1.2))
    y = np.arange(k)[::-1]
    ax.barh(y, probabilities[:k], color="#3566A5")
    ax.set_yticks(y)
    ax.set_yticklabels(labels[:k], fontsize=8)
    ax.set_xlabel("posterior probability")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return Path(path)


def chain_curves(trace, path, title: str | None = None):
    """Running diagnostics of one chain: cumulative weighted step count and
    cumulative weighted accepted-move count."""
    weights = trace.weight_of_step()
    moved = np.empty(trace.steps, dtype=bool)
    moved[0] = True
    moved[1:] = trace.model_of_step[1:] != trace.model_of_step[:-1]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(np.cumsum(weights), color="#C23B22", label="weighted steps")
    ax.plot(np.cumsum(weights * moved), color="#3566A5", label="weighted model changes")
    ax.set_xlabel("step")
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return Path(path)
