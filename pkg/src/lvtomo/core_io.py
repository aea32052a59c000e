"""Grid/field containers and bit-exact serialization.

The LVTF1 container is a tiny deterministic format: an ASCII magic line,
one ASCII metadata line (key=value pairs in fixed order), then the raw
float64 little-endian payload in row-major order.  Identical inputs
always produce byte-identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MAGIC = b"LVTF1\n"


class FileFormatError(Exception):
    """Raised when a file does not follow the LVTF1 layout."""


class PayloadLengthError(FileFormatError):
    """Raised when the binary payload is shorter or longer than the header demands."""


class NonFiniteDataError(FileFormatError):
    """Raised when a payload contains NaN or infinite values."""


@dataclass(frozen=True)
class GridSpec2D:
    """Uniform raster over a physical rectangle, samples at pixel centers."""

    nx: int
    ny: int
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs nx >= 2 and ny >= 2")
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("grid extent must have positive width and height")

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / self.nx

    @property
    def dy(self) -> float:
        return (self.ymax - self.ymin) / self.ny

    @property
    def pixel_area(self) -> float:
        return self.dx * self.dy

    def x_centers(self) -> np.ndarray:
        return self.xmin + (np.arange(self.nx) + 0.5) * self.dx

    def y_centers(self) -> np.ndarray:
        return self.ymin + (np.arange(self.ny) + 0.5) * self.dy


@dataclass(frozen=True)
class ScalarField2D:
    """Raster image on a GridSpec2D; values indexed [iy, ix], row-major."""

    grid: GridSpec2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.grid.ny, self.grid.nx):
            raise ValueError(
                f"values shape {v.shape} does not match grid ({self.grid.ny}, {self.grid.nx})"
            )
        if not np.all(np.isfinite(v)):
            raise NonFiniteDataError("field contains non-finite values")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class SinogramGrid:
    """Angles phi_i = phi0 + i*dphi, radii r_k = (k+1)*dr.

    The radial grid starts at dr (never r = 0) because the dual weight
    1/(2*pi*r) is singular at the origin.
    """

    phi0: float
    phi1: float
    nphi: int
    rmax: float
    nr: int

    def __post_init__(self):
        if self.nphi < 2 or self.nr < 2:
            raise ValueError("sinogram grid needs nphi >= 2 and nr >= 2")
        if self.rmax <= 0:
            raise ValueError("rmax must be positive")
        span = self.phi1 - self.phi0
        if not (0.0 <= span <= 2.0 * math.pi + 1e-12):
            raise ValueError("angular span must lie in [0, 2*pi]")

    @property
    def dphi(self) -> float:
        return (self.phi1 - self.phi0) / (self.nphi - 1)

    @property
    def dr(self) -> float:
        return self.rmax / self.nr

    @property
    def full_wrap(self) -> bool:
        return abs((self.phi1 - self.phi0) - 2.0 * math.pi) < 1e-12

    def phis(self) -> np.ndarray:
        return self.phi0 + np.arange(self.nphi) * self.dphi

    def rs(self) -> np.ndarray:
        return (np.arange(self.nr) + 1) * self.dr


@dataclass(frozen=True)
class Sinogram:
    grid: SinogramGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.grid.nphi, self.grid.nr):
            raise ValueError(
                f"values shape {v.shape} does not match grid ({self.grid.nphi}, {self.grid.nr})"
            )
        if not np.all(np.isfinite(v)):
            raise NonFiniteDataError("sinogram contains non-finite values")
        object.__setattr__(self, "values", v)


def _fmt(x: float) -> str:
    # repr round-trips float64 exactly and is deterministic
    return repr(float(x))


def _read_header(fh, path) -> dict:
    magic = fh.read(len(MAGIC))
    if magic != MAGIC:
        raise FileFormatError(f"{path}: bad magic {magic!r}")
    meta_line = b""
    while True:
        ch = fh.read(1)
        if not ch:
            raise FileFormatError(f"{path}: truncated header")
        if ch == b"\n":
            break
        meta_line += ch
    meta = {}
    for tok in meta_line.decode("ascii").split():
        key, _, val = tok.partition("=")
        meta[key] = val
    return meta


def _read_payload(fh, count: int, path) -> np.ndarray:
    raw = fh.read()
    if len(raw) != count * 8:
        raise PayloadLengthError(
            f"{path}: payload has {len(raw)} bytes, expected {count * 8}"
        )
    vals = np.frombuffer(raw, dtype="<f8").astype(np.float64)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteDataError(f"{path}: payload contains non-finite values")
    return vals


def write_field(fld: ScalarField2D, path) -> None:
    g = fld.grid
    meta = (
        f"nx={g.nx} ny={g.ny} xmin={_fmt(g.xmin)} xmax={_fmt(g.xmax)} "
        f"ymin={_fmt(g.ymin)} ymax={_fmt(g.ymax)}\n"
    )
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(meta.encode("ascii"))
        fh.write(np.ascontiguousarray(fld.values, dtype="<f8").tobytes())


def read_field(path) -> ScalarField2D:
    with open(path, "rb") as fh:
        meta = _read_header(fh, path)
        try:
            grid = GridSpec2D(
                nx=int(meta["nx"]),
                ny=int(meta["ny"]),
                xmin=float(meta["xmin"]),
                xmax=float(meta["xmax"]),
                ymin=float(meta["ymin"]),
                ymax=float(meta["ymax"]),
            )
        except KeyError as exc:
            raise FileFormatError(f"{path}: missing metadata key {exc}") from exc
        vals = _read_payload(fh, grid.nx * grid.ny, path)
    return ScalarField2D(grid, vals.reshape(grid.ny, grid.nx))


def write_sinogram(sino: Sinogram, path) -> None:
    g = sino.grid
    meta = (
        f"phi0={_fmt(g.phi0)} phi1={_fmt(g.phi1)} nphi={g.nphi} "
        f"rmax={_fmt(g.rmax)} nr={g.nr}\n"
    )
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(meta.encode("ascii"))
        fh.write(np.ascontiguousarray(sino.values, dtype="<f8").tobytes())


def read_sinogram(path) -> Sinogram:
    with open(path, "rb") as fh:
        meta = _read_header(fh, path)
        try:
            grid = SinogramGrid(
                phi0=float(meta["phi0"]),
                phi1=float(meta["phi1"]),
                nphi=int(meta["nphi"]),
                rmax=float(meta["rmax"]),
                nr=int(meta["nr"]),
            )
        except KeyError as exc:
            raise FileFormatError(f"{path}: missing metadata key {exc}") from exc
        vals = _read_payload(fh, grid.nphi * grid.nr, path)
    return Sinogram(grid, vals.reshape(grid.nphi, grid.nr))


def export_pgm(fld: ScalarField2D, window: tuple[float, float], path) -> None:
    """Write an 8-bit binary PGM; row 0 of the file is the largest-y row."""
    lo, hi = window
    if not hi > lo:
        raise ValueError("window must satisfy lo < hi")
    t = np.clip((fld.values - lo) / (hi - lo), 0.0, 1.0)
    # round half up, matching the documented midpoint behavior
    pix = np.floor(255.0 * t + 0.5).astype(np.uint8)
    pix = pix[::-1, :]  # y increases upward, PGM rows go top-down
    header = f"P5\n{fld.grid.nx} {fld.grid.ny}\n255\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(pix).tobytes())
