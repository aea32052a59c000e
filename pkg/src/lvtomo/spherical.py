"""Numeric spherical mean transform with centers on the plane x3 = 0 and its
dual restricted to a vertical reconstruction slice."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit, prange

from .core_io import GridSpec2D, NonFiniteDataError, ScalarField2D, _fmt, _read_header, _read_payload, MAGIC


@dataclass(frozen=True)
class SonarGrid:
    """Centers on a rectangle of the measurement plane, radii r_k = (k+1)*dr."""

    y1min: float
    y1max: float
    y2min: float
    y2max: float
    ny1: int
    ny2: int
    rmax: float
    nr: int

    def __post_init__(self):
        if self.ny1 < 2 or self.ny2 < 2 or self.nr < 2:
            raise ValueError("sonar grid needs at least 2 samples per axis")
        if self.rmax <= 0:
            raise ValueError("rmax must be positive")
        if not (self.y1max > self.y1min and self.y2max > self.y2min):
            raise ValueError("center rectangle must have positive extent")

    @property
    def dy1(self) -> float:
        return (self.y1max - self.y1min) / (self.ny1 - 1)

    @property
    def dy2(self) -> float:
        return (self.y2max - self.y2min) / (self.ny2 - 1)

    @property
    def dr(self) -> float:
        return self.rmax / self.nr

    def y1_centers(self) -> np.ndarray:
        return np.linspace(self.y1min, self.y1max, self.ny1)

    def y2_centers(self) -> np.ndarray:
        return np.linspace(self.y2min, self.y2max, self.ny2)

    def rs(self) -> np.ndarray:
        return (np.arange(self.nr) + 1) * self.dr


@dataclass(frozen=True)
class SonarData:
    grid: SonarGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.grid.ny1, self.grid.ny2, self.grid.nr):
            raise ValueError(
                f"values shape {v.shape} does not match grid "
                f"({self.grid.ny1}, {self.grid.ny2}, {self.grid.nr})"
            )
        if not np.all(np.isfinite(v)):
            raise NonFiniteDataError("sonar data contains non-finite values")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class SlicePlane:
    """Vertical plane x_axis = offset; slice coordinates are the remaining
    horizontal coordinate and x3."""

    axis: int
    offset: float

    def __post_init__(self):
        if self.axis not in (1, 2):
            raise ValueError("axis must be 1 or 2")

    def to3d(self, h, v):
        """Map slice coordinates (horizontal, x3) to a 3D point."""
        if self.axis == 1:
            return (self.offset, h, v)
        return (h, self.offset, v)


def sphere_points(n: int) -> np.ndarray:
    """Deterministic near-uniform point set on S2, closed under both
    horizontal mirrors so reflection-symmetric phantoms give exactly
    symmetric data.  Returns 4*ceil(n/4) points."""
    m = (n + 3) // 4
    k = np.arange(m)
    z = (2.0 * k + 1.0) / m - 1.0  # midpoint z-stratification of [-1, 1]
    golden = math.pi * (3.0 - math.sqrt(5.0))
    az = golden * k
    s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    base = np.stack([s * np.cos(az), s * np.sin(az), z], axis=1)
    pts = np.concatenate([
        base,
        base * np.array([-1.0, 1.0, 1.0]),
        base * np.array([1.0, -1.0, 1.0]),
        base * np.array([-1.0, -1.0, 1.0]),
    ])
    return pts


@njit(parallel=True, cache=True)
def _forward_sph_kernel(y1s, y2s, rs, pts, centers, rhos, amps):
    ny1 = y1s.shape[0]
    ny2 = y2s.shape[0]
    nr = rs.shape[0]
    npts = pts.shape[0]
    nb = rhos.shape[0]
    out = np.zeros((ny1, ny2, nr))
    for i1 in prange(ny1):
        y1 = y1s[i1]
        for i2 in range(ny2):
            y2 = y2s[i2]
            for k in range(nr):
                r = rs[k]
                acc = 0.0
                for m in range(npts):
                    px = y1 + r * pts[m, 0]
                    py = y2 + r * pts[m, 1]
                    pz = r * pts[m, 2]
                    for b in range(nb):
                        dx = px - centers[b, 0]
                        dy = py - centers[b, 1]
                        dz = pz - centers[b, 2]
                        if dx * dx + dy * dy + dz * dz < rhos[b] * rhos[b]:
                            acc += amps[b]
                out[i1, i2, k] = acc / npts
    return out


@njit(parallel=True, cache=True)
def _backproject_slice_kernel(data, y1s, y2s, dr, nr, cell, x1, x2, x3):
    nyp = x3.shape[0]
    nxp = x3.shape[1]
    ny1 = y1s.shape[0]
    ny2 = y2s.shape[0]
    out = np.zeros((nyp, nxp))
    for j in prange(nyp):
        for i in range(nxp):
            acc = 0.0
            for i1 in range(ny1):
                d1 = x1[j, i] - y1s[i1]
                for i2 in range(ny2):
                    d2 = x2[j, i] - y2s[i2]
                    rr = math.sqrt(d1 * d1 + d2 * d2 + x3[j, i] * x3[j, i])
                    u = rr / dr - 1.0
                    if u < 0.0 or u > nr - 1.0:
                        continue
                    k0 = int(math.floor(u))
                    if k0 >= nr - 1:
                        k0 = nr - 2
                    w = u - k0
                    g = (1.0 - w) * data[i1, i2, k0] + w * data[i1, i2, k0 + 1]
                    acc += cell * g / (4.0 * math.pi * rr * rr)
            out[j, i] = acc
    return out


def forward_spherical_numeric(phantom, sg: SonarGrid, n_sph: int) -> SonarData:
    """Spherical means of a ball phantom by deterministic sphere sampling."""
    if n_sph < 16:
        raise ValueError("n_sph must be at least 16")
    pts = sphere_points(n_sph)
    centers = np.array([[b.cx, b.cy, b.cz] for b in phantom.components]).reshape(-1, 3)
    rhos = np.array([b.rho for b in phantom.components])
    amps = np.array([b.amp for b in phantom.components])
    vals = _forward_sph_kernel(
        sg.y1_centers(), sg.y2_centers(), sg.rs(), pts, centers, rhos, amps
    )
    return SonarData(sg, vals)


def backproject_spherical_slice(
    data: SonarData, plane: SlicePlane, grid: GridSpec2D
) -> ScalarField2D:
    """Dual transform evaluated on a vertical slice; grid y-axis is x3 > 0."""
    if grid.ymin < 0 or grid.y_centers()[0] <= 0:
        raise ValueError("slice grid must lie in x3 > 0")
    sg = data.grid
    hs = grid.x_centers()
    vs = grid.y_centers()
    H, V = np.meshgrid(hs, vs)
    if plane.axis == 1:
        x1 = np.full_like(H, plane.offset)
        x2 = H
    else:
        x1 = H
        x2 = np.full_like(H, plane.offset)
    vals = _backproject_slice_kernel(
        data.values, sg.y1_centers(), sg.y2_centers(), sg.dr, sg.nr,
        sg.dy1 * sg.dy2, x1, x2, V,
    )
    return ScalarField2D(grid, vals)


def write_sonar_data(data: SonarData, path) -> None:
    g = data.grid
    meta = (
        f"y1min={_fmt(g.y1min)} y1max={_fmt(g.y1max)} "
        f"y2min={_fmt(g.y2min)} y2max={_fmt(g.y2max)} "
        f"ny1={g.ny1} ny2={g.ny2} rmax={_fmt(g.rmax)} nr={g.nr}\n"
    )
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(meta.encode("ascii"))
        fh.write(np.ascontiguousarray(data.values, dtype="<f8").tobytes())


def read_sonar_data(path) -> SonarData:
    from .core_io import FileFormatError

    with open(path, "rb") as fh:
        meta = _read_header(fh, path)
        try:
            grid = SonarGrid(
                y1min=float(meta["y1min"]),
                y1max=float(meta["y1max"]),
                y2min=float(meta["y2min"]),
                y2max=float(meta["y2max"]),
                ny1=int(meta["ny1"]),
                ny2=int(meta["ny2"]),
                rmax=float(meta["rmax"]),
                nr=int(meta["nr"]),
            )
        except KeyError as exc:
            raise FileFormatError(f"{path}: missing metadata key {exc}") from exc
        vals = _read_payload(fh, grid.ny1 * grid.ny2 * grid.nr, path)
    return SonarData(grid, vals.reshape(grid.ny1, grid.ny2, grid.nr))
