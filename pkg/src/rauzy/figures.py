"""Matplotlib figures written by ``render-all``.

Each function draws one figure into a file and returns its path.  The Agg
backend is forced so nothing needs a display.
"""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .render import PALETTE  # noqa: E402

DPI = 150


def _rgb(i: int) -> tuple[float, float, float]:
    return tuple(c / 255 for c in PALETTE[i % len(PALETTE)])


def _finish(fig, ax, path: Path, title: str, equal: bool = True) -> Path:
    # the totally real embedding is strongly anisotropic, so callers may opt out
    ax.set_aspect("equal" if equal else "auto")
    ax.set_title(title, fontsize=10)
    ax.tick_params(labelsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def scatter_clouds(
    clouds: Sequence[tuple[np.ndarray, int, str | None]],
    path: Path,
    title: str,
    marks: Sequence[tuple[complex, str]] = (),
    size: float = 0.05,
    equal: bool = True,
) -> Path:
    """Point clouds as (points, palette index, legend label) plus labelled marks."""
    fig, ax = plt.subplots(figsize=(5, 5))
    for pts, col, label in clouds:
        pts = np.asarray(pts)
        ax.scatter(pts.real, pts.imag, s=size, color=_rgb(col), linewidths=0, label=label, rasterized=True)
    for z, text in marks:
        ax.plot([z.real], [z.imag], "k.", ms=4)
        ax.annotate(text, (z.real, z.imag), fontsize=7, xytext=(3, 3), textcoords="offset points")
    if any(lab for _, _, lab in clouds):
        ax.legend(fontsize=6, markerscale=30, loc="best")
    return _finish(fig, ax, path, title, equal)


def polylines(
    curves: Sequence[tuple[np.ndarray, str]],
    path: Path,
    title: str,
    backdrop: np.ndarray | None = None,
) -> Path:
    fig, ax = plt.subplots(figsize=(5, 5))
    if backdrop is not None:
        ax.scatter(backdrop.real, backdrop.imag, s=0.05, color="0.75", linewidths=0, rasterized=True)
    for i, (v, label) in enumerate(curves):
        v = np.asarray(v)
        ax.plot(v.real, v.imag, lw=0.6, color=_rgb(i), label=label)
    if curves:
        ax.legend(fontsize=6)
    return _finish(fig, ax, path, title)


def decay_plot(levels: Sequence[int], dists: Sequence[float], ref: float, path: Path, title: str) -> Path:
    """Semi-log plot of successive sup-distances with a reference slope."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogy(levels, dists, "o-", color=_rgb(0), label="measured")
    lv = np.asarray(levels, dtype=float)
    ax.semilogy(lv, dists[0] * ref ** (lv - lv[0]), "--", color=_rgb(1), label=f"ratio {ref:.3f}")
    ax.set_xlabel("n")
    ax.set_ylabel("sup distance")
    ax.legend(fontsize=7)
    ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path
