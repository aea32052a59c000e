"""Matplotlib rendering of fields and masks to PNG files.

Each demo writes these figures next to its binary outputs so results can be
inspected without extra tooling.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .core_io import ScalarField2D
from .microlocal import Mask2D


def _extent(grid):
    return (grid.xmin, grid.xmax, grid.ymin, grid.ymax)


def render_field(fld: ScalarField2D, path, title: str = "", window=None) -> None:
    fig, ax = plt.subplots(figsize=(5, 5))
    kw = {}
    if window is not None:
        kw = {"vmin": window[0], "vmax": window[1]}
    im = ax.imshow(
        fld.values, origin="lower", extent=_extent(fld.grid), cmap="gray", **kw
    )
    fig.colorbar(im, ax=ax, shrink=0.8)
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def render_mask_overlay(fld: ScalarField2D, mask: Mask2D, path, title: str = "") -> None:
    """Field in gray with the predicted artifact tube tinted on top."""
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(fld.values, origin="lower", extent=_extent(fld.grid), cmap="gray")
    overlay = np.zeros(mask.mask.shape + (4,))
    overlay[mask.mask] = (1.0, 0.2, 0.1, 0.45)
    ax.imshow(overlay, origin="lower", extent=_extent(mask.grid))
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
