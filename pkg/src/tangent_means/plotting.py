"""PNG figures for CLI runs, rendered off-screen with matplotlib."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_rows(
    path: str | Path,
    x: Sequence[float],
    y: Sequence[float],
    *,
    xlabel: str,
    ylabel: str,
    title: str = "",
    reference: Sequence[float] | None = None,
    stderr: Sequence[float] | None = None,
) -> Path:
    """Line plot of ``y`` over ``x``; ``reference`` is overlaid dashed, ``stderr`` as error bars."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    fig, ax = plt.subplots(figsize=(5.0, 3.2), dpi=120)
    if stderr is not None:
        ax.errorbar(x, y, yerr=4.0 * np.asarray(stderr, dtype=float), fmt=".", ms=3, lw=0.6, label=ylabel)
    else:
        ax.plot(x, y, lw=1.2, label=ylabel)
    if reference is not None:
        ax.plot(x, np.asarray(reference, dtype=float), "--", lw=1.0, label="reference")
        ax.legend(frameon=False, fontsize=8)
    finite = y[np.isfinite(y)]
    if finite.size and finite.min() > 0 and finite.max() / finite.min() > 1e3:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title, fontsize=9)
    ax.spines[["top", "right"]].set_visible(False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path
