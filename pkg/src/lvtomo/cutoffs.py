"""Hard and smooth data truncation.

The smooth taper is the compactly supported bump
nu_eps(t) = exp(t^2 / (t^2 - eps^2)) for |t| < eps, 0 otherwise,
used to ramp angular ranges and center sets from 0 to 1 inside their
boundaries.  Hard truncation multiplies by the indicator and is the
source of the added artifacts the prediction module localizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core_io import Sinogram
from .spherical import SonarData

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AngularRange:
    """Detector angles [a, b] in radians, 0 < b - a <= 2*pi."""

    a: float
    b: float

    def __post_init__(self):
        if not (0.0 < self.b - self.a <= TWO_PI + 1e-12):
            raise ValueError("need 0 < b - a <= 2*pi")

    def wrap(self, phi):
        """Map angles into [a, a + 2*pi)."""
        return self.a + np.mod(np.asarray(phi, dtype=np.float64) - self.a, TWO_PI)

    def contains(self, phi):
        return self.wrap(phi) <= self.b + 1e-12


@dataclass(frozen=True)
class RectCenterSet:
    """Axis-aligned rectangle of sonar transceiver positions."""

    cx: float
    cy: float
    hx: float
    hy: float

    def __post_init__(self):
        if self.hx <= 0 or self.hy <= 0:
            raise ValueError("half-widths must be positive")

    @property
    def min_halfwidth(self) -> float:
        return min(self.hx, self.hy)

    def contains(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64)
        return (np.abs(y[..., 0] - self.cx) <= self.hx) & (
            np.abs(y[..., 1] - self.cy) <= self.hy
        )

    def corners(self):
        return [
            (self.cx - self.hx, self.cy - self.hy),
            (self.cx + self.hx, self.cy - self.hy),
            (self.cx + self.hx, self.cy + self.hy),
            (self.cx - self.hx, self.cy + self.hy),
        ]

    def boundary_samples(self, n: int):
        """n points spread along the four edges (corners excluded) with
        outward unit normals; returns (points (n,2), normals (n,2))."""
        per = max(2, n // 4)
        pts = []
        nrm = []
        tx = np.linspace(self.cx - self.hx, self.cx + self.hx, per + 2)[1:-1]
        ty = np.linspace(self.cy - self.hy, self.cy + self.hy, per + 2)[1:-1]
        for x in tx:
            pts.append((x, self.cy - self.hy))
            nrm.append((0.0, -1.0))
            pts.append((x, self.cy + self.hy))
            nrm.append((0.0, 1.0))
        for y in ty:
            pts.append((self.cx - self.hx, y))
            nrm.append((-1.0, 0.0))
            pts.append((self.cx + self.hx, y))
            nrm.append((1.0, 0.0))
        return np.array(pts), np.array(nrm)


@dataclass(frozen=True)
class DiscCenterSet:
    """Disc of sonar transceiver positions (smooth boundary, no corners)."""

    cx: float
    cy: float
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def min_halfwidth(self) -> float:
        return self.radius

    def contains(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64)
        return (y[..., 0] - self.cx) ** 2 + (y[..., 1] - self.cy) ** 2 <= self.radius**2

    def corners(self):
        return []

    def boundary_samples(self, n: int):
        t = TWO_PI * np.arange(n) / n
        nrm = np.stack([np.cos(t), np.sin(t)], axis=1)
        pts = np.array([self.cx, self.cy]) + self.radius * nrm
        return pts, nrm


CenterSet = RectCenterSet | DiscCenterSet


def nu_eps(t, eps: float):
    """Smooth bump: 1 at 0, exactly 0 for |t| >= eps."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    inside = np.abs(t) < eps
    ti = t[inside]
    out[inside] = np.exp(ti * ti / (ti * ti - eps * eps))
    if out.ndim == 0:
        return float(out)
    return out


def angular_cutoff_value(rng: AngularRange, eps: float, phi):
    """Smooth angular taper: 0 outside [a, b], 1 on [a+eps, b-eps]."""
    if not (0.0 < eps < (rng.b - rng.a) / 2.0):
        raise ValueError("need 0 < eps < (b - a) / 2")
    p = rng.wrap(phi)
    out = np.zeros_like(p)
    plateau = (p >= rng.a + eps) & (p <= rng.b - eps)
    out[plateau] = 1.0
    lo = (p >= rng.a) & (p < rng.a + eps)
    out[lo] = nu_eps(rng.a + eps - p[lo], eps)
    hi = (p > rng.b - eps) & (p <= rng.b)
    out[hi] = nu_eps(p[hi] - rng.b + eps, eps)
    if out.ndim == 0:
        return float(out)
    return out


def apply_angular_cutoff(
    sino: Sinogram, rng: AngularRange, mode: str = "hard", eps: float | None = None
) -> Sinogram:
    phis = sino.grid.phis()
    if mode == "hard":
        w = rng.contains(phis).astype(np.float64)
    elif mode == "smooth":
        if eps is None:
            raise ValueError("smooth cutoff needs eps")
        w = np.asarray(angular_cutoff_value(rng, eps, phis))
    else:
        raise ValueError(f"unknown cutoff mode {mode!r}")
    return Sinogram(sino.grid, sino.values * w[:, None])


def _ramp1d(t, lo: float, hi: float, eps: float):
    """1D version of the taper: 0 outside [lo, hi], 1 on [lo+eps, hi-eps]."""
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    plateau = (t >= lo + eps) & (t <= hi - eps)
    out[plateau] = 1.0
    lo_band = (t >= lo) & (t < lo + eps)
    out[lo_band] = nu_eps(lo + eps - t[lo_band], eps)
    hi_band = (t > hi - eps) & (t <= hi)
    out[hi_band] = nu_eps(t[hi_band] - hi + eps, eps)
    return out


def center_cutoff_value(K: CenterSet, eps: float, y):
    """Smooth taper over the center set: 1 on the shrunken interior, 0 outside K."""
    if not (0.0 < eps < K.min_halfwidth / 2.0):
        raise ValueError("need 0 < eps < half the minimum half-width/radius")
    y = np.asarray(y, dtype=np.float64)
    if isinstance(K, RectCenterSet):
        wx = _ramp1d(y[..., 0], K.cx - K.hx, K.cx + K.hx, eps)
        wy = _ramp1d(y[..., 1], K.cy - K.hy, K.cy + K.hy, eps)
        out = wx * wy
    else:
        d = np.hypot(y[..., 0] - K.cx, y[..., 1] - K.cy)
        out = np.zeros_like(d)
        out[d <= K.radius - eps] = 1.0
        band = (d > K.radius - eps) & (d < K.radius)
        out[band] = nu_eps(d[band] - K.radius + eps, eps)
    if out.ndim == 0:
        return float(out)
    return out


def apply_center_cutoff(
    data: SonarData, K: CenterSet, mode: str = "hard", eps: float | None = None
) -> SonarData:
    g = data.grid
    Y1, Y2 = np.meshgrid(g.y1_centers(), g.y2_centers(), indexing="ij")
    ys = np.stack([Y1, Y2], axis=-1)
    if mode == "hard":
        w = K.contains(ys).astype(np.float64)
    elif mode == "smooth":
        if eps is None:
            raise ValueError("smooth cutoff needs eps")
        w = np.asarray(center_cutoff_value(K, eps, ys))
    else:
        raise ValueError(f"unknown cutoff mode {mode!r}")
    return SonarData(g, data.values * w[:, :, None])
