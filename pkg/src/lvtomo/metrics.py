"""Artifact-energy and edge-preservation metrics.

RMS over predicted artifact tubes, the hard/smooth reduction ratio, and a
per-boundary-point profile of visibility flag vs reconstructed edge strength.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .core_io import ScalarField2D
from .cutoffs import AngularRange
from .microlocal import Covector2D, Mask2D, is_visible_circular
from .phantoms import DiscPhantom2D

RATIO_CAP = 1e6


def band_rms(fld: ScalarField2D, mask: Mask2D) -> float:
    """Root mean square of the field over the marked pixels."""
    if fld.values.shape != mask.mask.shape:
        raise ValueError("field and mask shapes differ")
    if mask.count() == 0:
        raise ValueError("mask is empty")
    v = fld.values[mask.mask]
    return float(math.sqrt(np.mean(v * v)))


def artifact_reduction_ratio(
    hard_img: ScalarField2D, smooth_img: ScalarField2D, artifact_mask: Mask2D
) -> float:
    """RMS(hard)/RMS(smooth) over the artifact tube, capped at 1e6."""
    if hard_img.grid != smooth_img.grid:
        raise ValueError("images live on different grids")
    num = band_rms(hard_img, artifact_mask)
    den = band_rms(smooth_img, artifact_mask)
    if den == 0.0:
        return RATIO_CAP
    return min(num / den, RATIO_CAP)


@dataclass(frozen=True)
class EdgeSample:
    disc_index: int
    boundary_angle: float
    visible: bool
    gradient: float


def edge_visibility_profile(
    fld: ScalarField2D,
    phantom: DiscPhantom2D,
    rng: AngularRange,
    n_samples: int,
):
    """For boundary points of each disc: predicted visibility of the outward
    conormal and the one-pixel normal finite difference of the field."""
    if n_samples < 16:
        raise ValueError("n_samples must be at least 16")
    g = fld.grid
    xs = g.x_centers()
    ys = g.y_centers()
    step = g.dx
    rows = []
    for idx, d in enumerate(phantom.components):
        for t in 2.0 * math.pi * np.arange(n_samples) / n_samples:
            nx, ny = math.cos(t), math.sin(t)
            px = d.cx + d.rho * nx
            py = d.cy + d.rho * ny
            visible = is_visible_circular(Covector2D((px, py), (nx, ny)), rng)
            grad = 0.0
            pts = []
            for s in (-0.5, 0.5):
                qx, qy = px + s * step * nx, py + s * step * ny
                i = int(round((qx - g.xmin) / g.dx - 0.5))
                j = int(round((qy - g.ymin) / g.dy - 0.5))
                if 0 <= i < g.nx and 0 <= j < g.ny:
                    pts.append(fld.values[j, i])
            if len(pts) == 2:
                grad = abs(pts[1] - pts[0])
            rows.append(EdgeSample(idx, float(t), bool(visible), float(grad)))
    return rows


def _circ_dist(a: float, b: float) -> float:
    d = (a - b) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def visible_edge_gradient_mean(
    fld: ScalarField2D,
    phantom: DiscPhantom2D,
    rng: AngularRange,
    eps: float,
    n_samples: int = 360,
) -> float:
    """Mean edge gradient over visible boundary normals whose direction is at
    angular distance > 2*eps from the cutoff endpoint directions."""
    endpoints = [rng.a, rng.b, rng.a + math.pi, rng.b + math.pi]
    rows = edge_visibility_profile(fld, phantom, rng, n_samples)
    grads = [
        r.gradient
        for r in rows
        if r.visible
        and min(_circ_dist(r.boundary_angle, e) for e in endpoints) > 2.0 * eps
    ]
    if not grads:
        raise ValueError("no boundary samples away from the endpoint directions")
    return float(np.mean(grads))


def pat_artifact_masks(
    phantom,
    rng,
    grid,
    tube: float,
    edge_tube: float | None = None,
    control_margin: float | None = None,
):
    """Artifact and control tube masks for a circular-transform experiment.

    The artifact mask is the tube around the predicted circles with a band of
    width `edge_tube` around the true phantom edges removed (default 3*tube).
    The control mask is the same circle family rotated by 90 degrees about the
    origin, minus the predicted tubes and a wider band `control_margin`
    (default 6*tube) around the true edges: the control measures clean
    background, so it must stay clear of true-edge sidelobes, while the
    artifact tube only drops pixels that overlap the edge itself.
    """
    from .microlocal import ArtifactCurveSet, Circle2D, predicted_artifact_circles
    from .microlocal import rasterize_mask

    if edge_tube is None:
        edge_tube = 3.0 * tube
    if control_margin is None:
        control_margin = 6.0 * tube
    curves = predicted_artifact_circles(phantom, rng)
    pred = rasterize_mask(curves, grid, tube)
    edges = ArtifactCurveSet(
        tuple(
            Circle2D((d.cx, d.cy), d.rho, float("nan"), i)
            for i, d in enumerate(phantom.components)
        )
    )
    edge = rasterize_mask(edges, grid, edge_tube)
    edge_wide = rasterize_mask(edges, grid, control_margin)
    rotated = ArtifactCurveSet(
        tuple(
            Circle2D((-c.center[1], c.center[0]), c.radius, c.endpoint_angle, c.disc_index)
            for c in curves.circles()
        )
    )
    ctrl = rasterize_mask(rotated, grid, tube)
    artifact = pred.mask & ~edge.mask
    control = ctrl.mask & ~pred.mask & ~edge_wide.mask
    return Mask2D(grid, artifact), Mask2D(grid, control)


def sonar_artifact_masks(
    phantom,
    K,
    plane,
    grid,
    tube: float,
    n_boundary: int = 360,
    n_arc: int = 512,
    edge_tube: float | None = None,
    control_margin: float | None = None,
):
    """Artifact and control tube masks on a sonar reconstruction slice.

    The control region is the artifact mask rotated a quarter turn in pixel
    space (the slice grid must be square), minus the artifact tube and a
    margin around the true ball cross-sections, with the same width
    conventions as pat_artifact_masks.
    """
    from .microlocal import ArtifactCurveSet, Circle2D
    from .microlocal import predicted_artifact_curves_sonar, rasterize_mask

    if grid.nx != grid.ny:
        raise ValueError("control rotation needs a square slice grid")
    if edge_tube is None:
        edge_tube = 3.0 * tube
    if control_margin is None:
        control_margin = 6.0 * tube
    curves = predicted_artifact_curves_sonar(phantom, K, n_boundary, n_arc)
    pred = rasterize_mask(curves, grid, tube, slice_plane=plane)
    edge_circles = []
    for i, b in enumerate(phantom.components):
        center3 = (b.cx, b.cy, b.cz)
        off = center3[plane.axis - 1] - plane.offset
        if abs(off) >= b.rho:
            continue
        h = b.cy if plane.axis == 1 else b.cx
        rad = math.sqrt(b.rho * b.rho - off * off)
        edge_circles.append(Circle2D((h, b.cz), rad, float("nan"), i))
    edge_set = ArtifactCurveSet(tuple(edge_circles))
    edge = rasterize_mask(edge_set, grid, edge_tube)
    edge_wide = rasterize_mask(edge_set, grid, control_margin)
    ctrl = np.rot90(pred.mask)
    artifact = pred.mask & ~edge.mask
    control = ctrl & ~pred.mask & ~edge_wide.mask
    return Mask2D(grid, artifact), Mask2D(grid, control)


EDGE_CSV_HEADER = ["disc_index", "boundary_angle", "visible", "gradient"]
METRIC_CSV_HEADER = ["metric", "value"]


def write_edge_profile_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(EDGE_CSV_HEADER)
        for r in rows:
            w.writerow([r.disc_index, repr(r.boundary_angle), int(r.visible), repr(r.gradient)])


def write_metrics_csv(metrics: dict, path) -> None:
    """One row per named scalar metric, values via repr for exact round trip."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(METRIC_CSV_HEADER)
        for key in metrics:
            w.writerow([key, repr(float(metrics[key]))])
