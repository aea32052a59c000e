"""Analytic disc/ball phantoms with closed-form circular and spherical means.

These serve as exact oracles for the numeric transforms: the circular mean
of a disc indicator is an arc-length fraction, the spherical mean of a ball
indicator is a spherical-cap area fraction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core_io import GridSpec2D, ScalarField2D, Sinogram, SinogramGrid


@dataclass(frozen=True)
class Disc:
    cx: float
    cy: float
    rho: float
    amp: float


@dataclass(frozen=True)
class Ball:
    cx: float
    cy: float
    cz: float
    rho: float
    amp: float


@dataclass(frozen=True)
class DiscPhantom2D:
    """Union of weighted discs supported inside the open unit disk."""

    components: tuple[Disc, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        for d in comps:
            if d.rho <= 0:
                raise ValueError("disc radius must be positive")
            if math.hypot(d.cx, d.cy) + d.rho >= 1.0:
                raise ValueError(
                    f"disc at ({d.cx}, {d.cy}) with radius {d.rho} leaves the unit disk"
                )
        object.__setattr__(self, "components", comps)


@dataclass(frozen=True)
class BallPhantom3D:
    """Union of weighted balls supported in the open upper half space x3 > 0."""

    components: tuple[Ball, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        for b in comps:
            if b.rho <= 0:
                raise ValueError("ball radius must be positive")
            if b.cz - b.rho <= 0:
                raise ValueError(
                    f"ball at ({b.cx}, {b.cy}, {b.cz}) with radius {b.rho} touches x3 = 0"
                )
        object.__setattr__(self, "components", comps)


def _cap_cosine(d, r, rho):
    """cos of the intersection half-angle; clamped for tangency round-off."""
    return np.clip((d * d + r * r - rho * rho) / (2.0 * d * r), -1.0, 1.0)


def _arc_fraction(d, r, rho):
    """Fraction of the circle of radius r at distance d inside a disc of radius rho."""
    d = np.asarray(d, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    inside = d + r <= rho
    outside = (d >= r + rho) | (r >= d + rho)
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.arccos(_cap_cosine(np.maximum(d, 1e-300), r, rho)) / np.pi
    return np.where(inside, 1.0, np.where(outside, 0.0, frac))


def _cap_fraction(d, r, rho):
    """Fraction of the sphere of radius r at distance d inside a ball of radius rho."""
    d = np.asarray(d, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    inside = d + r <= rho
    outside = (d >= r + rho) | (r >= d + rho)
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = (1.0 - _cap_cosine(np.maximum(d, 1e-300), r, rho)) / 2.0
    return np.where(inside, 1.0, np.where(outside, 0.0, frac))


def circular_mean_disc(c, rho: float, phi: float, r: float) -> float:
    """Mean of a unit disc indicator over the circle of radius r centered at theta(phi)."""
    d = math.hypot(math.cos(phi) - c[0], math.sin(phi) - c[1])
    return float(_arc_fraction(d, r, rho))


def spherical_mean_ball(c, rho: float, y, r: float) -> float:
    """Mean of a unit ball indicator over the sphere of radius r centered at (y, 0)."""
    d = math.sqrt((y[0] - c[0]) ** 2 + (y[1] - c[1]) ** 2 + c[2] ** 2)
    return float(_cap_fraction(d, r, rho))


def rasterize2d(phantom: DiscPhantom2D, grid: GridSpec2D) -> ScalarField2D:
    """Point-sampled rasterization: each pixel center gets the summed amplitudes."""
    xs = grid.x_centers()[None, :]
    ys = grid.y_centers()[:, None]
    vals = np.zeros((grid.ny, grid.nx))
    for d in phantom.components:
        vals += d.amp * (((xs - d.cx) ** 2 + (ys - d.cy) ** 2) < d.rho**2)
    return ScalarField2D(grid, vals)


def analytic_circular_sinogram(phantom: DiscPhantom2D, sg: SinogramGrid) -> Sinogram:
    phis = sg.phis()
    rs = sg.rs()
    vals = np.zeros((sg.nphi, sg.nr))
    for d in phantom.components:
        dist = np.hypot(np.cos(phis) - d.cx, np.sin(phis) - d.cy)
        vals += d.amp * _arc_fraction(dist[:, None], rs[None, :], d.rho)
    return Sinogram(sg, vals)


def analytic_sonar_data(phantom: BallPhantom3D, sg):
    """Closed-form spherical means on a SonarGrid, summed over components."""
    from .spherical import SonarData

    y1 = sg.y1_centers()[:, None, None]
    y2 = sg.y2_centers()[None, :, None]
    rs = sg.rs()[None, None, :]
    vals = np.zeros((sg.ny1, sg.ny2, sg.nr))
    for b in phantom.components:
        dist = np.sqrt((y1 - b.cx) ** 2 + (y2 - b.cy) ** 2 + b.cz**2)
        vals += b.amp * _cap_fraction(dist, rs, b.rho)
    return SonarData(sg, vals)


def load_phantom(path):
    """Read a phantom description from JSON with a `discs` or `balls` list."""
    with open(path) as fh:
        doc = json.load(fh)
    if "discs" in doc:
        return DiscPhantom2D(
            tuple(Disc(d["cx"], d["cy"], d["rho"], d["amp"]) for d in doc["discs"])
        )
    if "balls" in doc:
        return BallPhantom3D(
            tuple(
                Ball(b["cx"], b["cy"], b["cz"], b["rho"], b["amp"])
                for b in doc["balls"]
            )
        )
    raise ValueError(f"{path}: phantom file needs a 'discs' or 'balls' entry")


def save_phantom(phantom, path) -> None:
    if isinstance(phantom, DiscPhantom2D):
        doc = {
            "discs": [
                {"cx": d.cx, "cy": d.cy, "rho": d.rho, "amp": d.amp}
                for d in phantom.components
            ]
        }
    else:
        doc = {
            "balls": [
                {"cx": b.cx, "cy": b.cy, "cz": b.cz, "rho": b.rho, "amp": b.amp}
                for b in phantom.components
            ]
        }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
