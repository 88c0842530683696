"""
Static SVG figures.

Figures go through matplotlib's Agg canvas with a fixed SVG hash salt and no
date metadata, so the same data always renders to the same bytes. CSV files
stay the ground truth; the figures only mirror them.
"""

import io as _io
import logging
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..eigen import EigenPair  # noqa: E402
from ..utils import io  # noqa: E402

logger = logging.getLogger(__name__)

matplotlib.rcParams["svg.hashsalt"] = "regland"
matplotlib.rcParams["svg.fonttype"] = "none"

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"]


def save_svg(fig, path: Path) -> Path:
    buffer = _io.StringIO()
    fig.savefig(buffer, format="svg", metadata={"Date": None})
    plt.close(fig)
    return io.write_text_atomic(path, buffer.getvalue())


def _normalized(values: np.ndarray) -> np.ndarray:
    peak = np.max(np.abs(values))
    return values / peak if peak > 0 else values


def plot_overlay(
    x: np.ndarray,
    u: np.ndarray,
    pairs: Sequence[EigenPair],
    path: Path,
    peaks: Optional[np.ndarray] = None,
) -> Path:
    """Landscape function (black) with the eigenfunctions |φ_k| on top, all scaled to 1."""
    fig, ax = plt.subplots(figsize=(10, 4))
    ax.plot(x, _normalized(u), color="black", linewidth=1.2, label="u")
    for i, pair in enumerate(pairs):
        ax.plot(
            x,
            np.abs(pair.phi),
            color=PALETTE[i % len(PALETTE)],
            linewidth=0.8,
            label=f"|φ_{pair.index}|",
        )
    if peaks is not None and len(peaks):
        ax.plot(x[peaks], _normalized(u)[peaks], "kv", markersize=4, label="u peaks")

    ax.set_xlabel("x")
    ax.set_xlim(0.0, 1.0)
    ax.legend(fontsize="small", loc="upper right")
    ax.grid(True, alpha=0.3)
    return save_svg(fig, path)


def plot_fields(
    x: np.ndarray, fields: dict[str, np.ndarray], path: Path, title: str = "", log: bool = False
) -> Path:
    """Several fields on shared axes, e.g. V with its regularizations."""
    fig, ax = plt.subplots(figsize=(10, 4))
    for i, (label, values) in enumerate(fields.items()):
        ax.plot(x, values, color=PALETTE[i % len(PALETTE)], linewidth=0.9, label=label)

    if log:
        ax.set_yscale("log")
    ax.set_xlabel("x")
    ax.set_xlim(0.0, 1.0)
    ax.set_title(title)
    ax.legend(fontsize="small", loc="upper right")
    ax.grid(True, alpha=0.3)
    return save_svg(fig, path)


def plot_panels(x: np.ndarray, panels: dict[str, dict[str, np.ndarray]], path: Path) -> Path:
    """One row of axes per panel, each with its own fields."""
    fig, axs = plt.subplots(len(panels), 1, figsize=(10, 2.6 * len(panels)), sharex=True, squeeze=False)
    for ax, (title, fields) in zip(axs[:, 0], panels.items()):
        for i, (label, values) in enumerate(fields.items()):
            ax.plot(x, values, color=PALETTE[i % len(PALETTE)], linewidth=0.9, label=label)
        ax.set_title(title, fontsize="small")
        ax.legend(fontsize="x-small", loc="upper right")
        ax.grid(True, alpha=0.3)

    axs[-1, 0].set_xlabel("x")
    axs[-1, 0].set_xlim(0.0, 1.0)
    fig.tight_layout()
    return save_svg(fig, path)


def plot_loglog(
    series: dict[str, tuple[np.ndarray, np.ndarray]], path: Path, xlabel: str = "t", ylabel: str = ""
) -> Path:
    """Log-log curves, e.g. residual norms against t."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for i, (label, (xs, ys)) in enumerate(series.items()):
        positive = np.asarray(ys) > 0
        ax.loglog(
            np.asarray(xs)[positive],
            np.asarray(ys)[positive],
            "o-",
            color=PALETTE[i % len(PALETTE)],
            markersize=3,
            label=label,
        )

    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(fontsize="small")
    ax.grid(True, which="both", alpha=0.3)
    return save_svg(fig, path)
