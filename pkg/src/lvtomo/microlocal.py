"""Geometric artifact prediction from the canonical-relation maps.

Object-space covectors map to data-space points: in 2D, the line through x
along xi meets the detector circle at two angles; in the sonar geometry the
map c sends (x, xi) to the unique sphere through x conormal to xi, and its
inverse places a covector back on that sphere.  Added artifacts are generated
by the boundary of the acquisition set: circles tangent to the phantom for the
circular transform, semicircles (and whole hemispheres at corners of K) for
the spherical one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .core_io import GridSpec2D
from .cutoffs import AngularRange, CenterSet, DiscCenterSet, RectCenterSet
from .phantoms import BallPhantom3D, DiscPhantom2D
from .spherical import SlicePlane


@dataclass(frozen=True)
class Covector2D:
    """(x, xi) with x in the open unit disk and xi nonzero."""

    x: tuple[float, float]
    xi: tuple[float, float]

    def __post_init__(self):
        if math.hypot(*self.x) >= 1.0:
            raise ValueError("base point must lie in the open unit disk")
        if self.xi[0] == 0.0 and self.xi[1] == 0.0:
            raise ValueError("xi must be nonzero")


@dataclass(frozen=True)
class Covector3D:
    """(x, xi) with x3 > 0 and xi nonzero."""

    x: tuple[float, float, float]
    xi: tuple[float, float, float]

    def __post_init__(self):
        if self.x[2] <= 0.0:
            raise ValueError("base point must have x3 > 0")
        if self.xi == (0.0, 0.0, 0.0):
            raise ValueError("xi must be nonzero")


@dataclass(frozen=True)
class DataCovectorSonar:
    """Data-side image of a sonar covector: sphere (y, r), scale alpha, and
    the upper-hemisphere unit normal omega."""

    y: tuple[float, float]
    r: float
    alpha: float
    omega: tuple[float, float, float]

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("r must be positive")
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")
        if self.omega[2] <= 0:
            raise ValueError("omega must lie in the open upper hemisphere")


@dataclass(frozen=True)
class Circle2D:
    """Predicted artifact circle tangent to a generating disc."""

    center: tuple[float, float]
    radius: float
    endpoint_angle: float
    disc_index: int


@dataclass(frozen=True)
class Arc3D:
    """Sampled semicircle of predicted artifacts on a data sphere."""

    points: np.ndarray = field(repr=False)  # (m, 3), on S(y, r), x3 >= 0
    y: tuple[float, float]
    r: float
    eta: tuple[float, float]
    ball_index: int
    tangency_sign: int  # +1 for r = d + rho, -1 for r = d - rho

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 2:
            raise ValueError("polyline needs at least 2 points of shape (m, 3)")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class Hemisphere:
    """Predicted artifact hemisphere S(y, r) in x3 > 0, generated by a corner of K."""

    y: tuple[float, float]
    r: float
    ball_index: int
    corner: tuple[float, float]


@dataclass(frozen=True)
class ArtifactCurveSet:
    curves: tuple

    def circles(self):
        return [c for c in self.curves if isinstance(c, Circle2D)]

    def arcs(self):
        return [c for c in self.curves if isinstance(c, Arc3D)]

    def hemispheres(self):
        return [c for c in self.curves if isinstance(c, Hemisphere)]


@dataclass(frozen=True)
class Mask2D:
    grid: GridSpec2D
    mask: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=bool)
        if m.shape != (self.grid.ny, self.grid.nx):
            raise ValueError("mask shape does not match grid")
        object.__setattr__(self, "mask", m)

    def count(self) -> int:
        return int(self.mask.sum())


def ray_circle_angles(cv: Covector2D) -> tuple[float, float]:
    """Angles of the two intersections of the line {x + t*xi} with the unit
    circle; the t < 0 branch first, then t > 0."""
    x = np.asarray(cv.x)
    xi = np.asarray(cv.xi)
    a = float(xi @ xi)
    b = 2.0 * float(x @ xi)
    c = float(x @ x) - 1.0
    disc = math.sqrt(b * b - 4.0 * a * c)  # positive since ||x|| < 1
    t1 = (-b - disc) / (2.0 * a)
    t2 = (-b + disc) / (2.0 * a)
    p1 = x + t1 * xi
    p2 = x + t2 * xi
    phi1 = math.atan2(p1[1], p1[0]) % (2.0 * math.pi)
    phi2 = math.atan2(p2[1], p2[0]) % (2.0 * math.pi)
    return phi1, phi2


def is_visible_circular(cv: Covector2D, rng: AngularRange) -> bool:
    """A covector is (possibly) visible iff one of its ray angles is in [a, b]."""
    phi1, phi2 = ray_circle_angles(cv)
    return bool(rng.contains(phi1)) or bool(rng.contains(phi2))


def predicted_artifact_circles(
    phantom: DiscPhantom2D, rng: AngularRange
) -> ArtifactCurveSet:
    """Circles centered at the range-endpoint detectors, tangent to each disc."""
    curves = []
    for endpoint in (rng.a, rng.b):
        e = endpoint % (2.0 * math.pi)
        center = (math.cos(e), math.sin(e))
        for idx, d in enumerate(phantom.components):
            dist = math.hypot(center[0] - d.cx, center[1] - d.cy)
            for radius in (dist - d.rho, dist + d.rho):
                if radius <= 0:
                    continue
                # circle centered on the unit circle meets the open disk iff 0 < radius < 2
                if radius >= 2.0:
                    continue
                curves.append(Circle2D(center, radius, e, idx))
    return ArtifactCurveSet(tuple(curves))


def sonar_cov_to_data(cv: Covector3D) -> DataCovectorSonar:
    """The diffeomorphism c: covectors with xi3 != 0 to data-sphere covectors."""
    x = np.asarray(cv.x)
    xi = np.asarray(cv.xi)
    if xi[2] == 0.0:
        raise ValueError("invisible covector: xi3 = 0 is never conormal to a data sphere")
    nrm = float(np.linalg.norm(xi))
    sgn = xi[2] / abs(xi[2])
    y = x[:2] - (x[2] / xi[2]) * xi[:2]
    r = x[2] * nrm / abs(xi[2])
    alpha = sgn * nrm
    omega = (sgn / nrm) * xi
    return DataCovectorSonar((y[0], y[1]), float(r), float(alpha), tuple(omega))


def sonar_data_to_cov(y, r: float, nu, alpha: float) -> Covector3D:
    """The inverse map: place the covector alpha*n on the sphere S(y, r)."""
    if r <= 0:
        raise ValueError("r must be positive")
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    nu = np.asarray(nu, dtype=np.float64)
    horiz = nu / alpha
    s2 = float(horiz @ horiz)
    if s2 >= 1.0:
        raise ValueError("||nu/alpha|| must be < 1")
    nbar = np.array([horiz[0], horiz[1], math.sqrt(1.0 - s2)])
    x = np.array([y[0], y[1], 0.0]) + r * nbar
    xi = alpha * nbar
    return Covector3D(tuple(x), tuple(xi))


def is_visible_sonar(cv: Covector3D, K: CenterSet) -> bool:
    """Visible iff the sphere conormal to (x, xi) is centered in K."""
    if cv.xi[2] == 0.0:
        return False
    data = sonar_cov_to_data(cv)
    return bool(K.contains(np.asarray(data.y)))


def _semicircle(y, r, eta, n, m: int) -> np.ndarray:
    """Sample the circle on S(y, r) cut by the vertical plane parallel to eta
    through (y + r*n', 0), keeping the open upper half."""
    eta = np.asarray(eta, dtype=np.float64)
    ehat = eta / np.linalg.norm(eta)
    mhat = np.array([-ehat[1], ehat[0]])
    np_h = r * np.asarray(n[:2])
    p = float(np_h @ mhat)
    rc = math.sqrt(max(r * r - p * p, 0.0))
    t = np.linspace(0.0, math.pi, m)
    horiz = np.asarray(y) + p * mhat
    pts = np.empty((m, 3))
    pts[:, 0] = horiz[0] + rc * np.cos(t) * ehat[0]
    pts[:, 1] = horiz[1] + rc * np.cos(t) * ehat[1]
    pts[:, 2] = rc * np.sin(t)
    return pts


def predicted_artifact_curves_sonar(
    phantom: BallPhantom3D,
    K: CenterSet,
    n_boundary: int,
    n_arc_samples: int = 512,
) -> ArtifactCurveSet:
    """Semicircles of added artifacts from smooth boundary points of K, plus
    whole hemispheres from each corner of a rectangular K."""
    if n_boundary < 8:
        raise ValueError("n_boundary must be at least 8")
    pts, normals = K.boundary_samples(n_boundary)
    curves = []
    for yb, eta in zip(pts, normals):
        for idx, ball in enumerate(phantom.components):
            delta = np.array([ball.cx - yb[0], ball.cy - yb[1], ball.cz])
            d = float(np.linalg.norm(delta))
            u = delta / d  # unit normal at both tangency points, u3 > 0
            for sign, r in ((-1, d - ball.rho), (1, d + ball.rho)):
                if r <= 0:
                    continue
                arc = _semicircle(yb, r, eta, u, n_arc_samples)
                curves.append(
                    Arc3D(arc, (yb[0], yb[1]), r, (eta[0], eta[1]), idx, sign)
                )
    for corner in K.corners():
        for idx, ball in enumerate(phantom.components):
            d = math.sqrt(
                (ball.cx - corner[0]) ** 2 + (ball.cy - corner[1]) ** 2 + ball.cz**2
            )
            for r in (d - ball.rho, d + ball.rho):
                if r <= 0:
                    continue
                curves.append(Hemisphere((corner[0], corner[1]), r, idx, corner))
    return ArtifactCurveSet(tuple(curves))


def rasterize_mask(
    curves: ArtifactCurveSet,
    grid: GridSpec2D,
    tube: float,
    slice_plane: SlicePlane | None = None,
) -> Mask2D:
    """Pixel tube around the predicted curves: a pixel is marked iff its
    center is within `tube` of a curve.  3D curves are first filtered to the
    slice plane; hemispheres use the exact sphere distance."""
    if tube <= 0:
        raise ValueError("tube must be positive")
    xs = grid.x_centers()
    ys = grid.y_centers()
    X, Y = np.meshgrid(xs, ys)
    mask = np.zeros((grid.ny, grid.nx), dtype=bool)

    for c in curves.circles():
        dist = np.abs(np.hypot(X - c.center[0], Y - c.center[1]) - c.radius)
        mask |= dist <= tube

    dot_pts = []
    for c in curves.arcs():
        if slice_plane is None:
            raise ValueError("3D curves need a slice plane")
        p = c.points
        off = np.abs(p[:, slice_plane.axis - 1] - slice_plane.offset)
        keep = p[off <= tube]
        if keep.size:
            h = keep[:, 1] if slice_plane.axis == 1 else keep[:, 0]
            dot_pts.append(np.stack([h, keep[:, 2]], axis=1))
    if dot_pts:
        pts = np.concatenate(dot_pts)
        dx, dy = grid.dx, grid.dy
        half_w = int(math.ceil(tube / dx)) + 1
        half_h = int(math.ceil(tube / dy)) + 1
        for hx, vy in pts:
            i0 = int(math.floor((hx - grid.xmin) / dx - 0.5))
            j0 = int(math.floor((vy - grid.ymin) / dy - 0.5))
            ilo, ihi = max(i0 - half_w, 0), min(i0 + half_w + 1, grid.nx)
            jlo, jhi = max(j0 - half_h, 0), min(j0 + half_h + 1, grid.ny)
            if ilo >= ihi or jlo >= jhi:
                continue
            sub = (X[jlo:jhi, ilo:ihi] - hx) ** 2 + (Y[jlo:jhi, ilo:ihi] - vy) ** 2
            mask[jlo:jhi, ilo:ihi] |= sub <= tube * tube

    for c in curves.hemispheres():
        if slice_plane is None:
            raise ValueError("3D curves need a slice plane")
        if slice_plane.axis == 1:
            d1 = slice_plane.offset - c.y[0]
            d2 = X - c.y[1]
        else:
            d1 = X - c.y[0]
            d2 = slice_plane.offset - c.y[1]
        dist = np.abs(np.sqrt(d1**2 + d2**2 + Y**2) - c.r)
        mask |= (dist <= tube) & (Y > 0)

    return Mask2D(grid, mask)


def _curve_record(c) -> dict:
    if isinstance(c, Circle2D):
        return {
            "kind": "circle2d",
            "center": list(c.center),
            "radius": c.radius,
            "endpoint_angle": c.endpoint_angle,
            "disc_index": c.disc_index,
        }
    if isinstance(c, Arc3D):
        return {
            "kind": "arc3d",
            "y": list(c.y),
            "r": c.r,
            "eta": list(c.eta),
            "ball_index": c.ball_index,
            "tangency_sign": c.tangency_sign,
            "points": c.points.tolist(),
        }
    return {
        "kind": "hemisphere",
        "y": list(c.y),
        "r": c.r,
        "ball_index": c.ball_index,
        "corner": list(c.corner),
    }


def save_curves_json(curves: ArtifactCurveSet, path) -> None:
    with open(path, "w") as fh:
        json.dump({"curves": [_curve_record(c) for c in curves.curves]}, fh)
        fh.write("\n")


def load_curves_json(path) -> ArtifactCurveSet:
    with open(path) as fh:
        doc = json.load(fh)
    out = []
    for rec in doc["curves"]:
        if rec["kind"] == "circle2d":
            out.append(
                Circle2D(
                    tuple(rec["center"]), rec["radius"], rec["endpoint_angle"],
                    rec["disc_index"],
                )
            )
        elif rec["kind"] == "arc3d":
            out.append(
                Arc3D(
                    np.asarray(rec["points"]), tuple(rec["y"]), rec["r"],
                    tuple(rec["eta"]), rec["ball_index"], rec["tangency_sign"],
                )
            )
        elif rec["kind"] == "hemisphere":
            out.append(
                Hemisphere(tuple(rec["y"]), rec["r"], rec["ball_index"], tuple(rec["corner"]))
            )
        else:
            raise ValueError(f"unknown curve kind {rec['kind']!r}")
    return ArtifactCurveSet(tuple(out))
