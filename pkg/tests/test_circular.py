import math

import numpy as np
import pytest

from lvtomo.circular import backproject_circular, forward_circular_numeric, radial_filter
from lvtomo.core_io import GridSpec2D, ScalarField2D, Sinogram, SinogramGrid
from lvtomo.phantoms import Disc, DiscPhantom2D, analytic_circular_sinogram, rasterize2d


def gaussian_field(grid, blobs):
    xs = grid.x_centers()[None, :]
    ys = grid.y_centers()[:, None]
    vals = np.zeros((grid.ny, grid.nx))
    for cx, cy, s, a in blobs:
        vals += a * np.exp(-((xs - cx) ** 2 + (ys - cy) ** 2) / (2 * s * s))
    return ScalarField2D(grid, vals)


def test_zero_field_zero_sinogram():
    grid = GridSpec2D(32, 32, -1, 1, -1, 1)
    sg = SinogramGrid(0, math.pi, 8, 2.0, 16)
    sino = forward_circular_numeric(ScalarField2D(grid, np.zeros((32, 32))), sg, 64)
    assert np.all(sino.values == 0)


def test_n_arc_validation():
    grid = GridSpec2D(8, 8, -1, 1, -1, 1)
    sg = SinogramGrid(0, math.pi, 2, 2.0, 2)
    with pytest.raises(ValueError):
        forward_circular_numeric(ScalarField2D(grid, np.zeros((8, 8))), sg, 4)


def test_unit_disc_value_at_r1():
    # chi of the unit disk: circle of radius 1 centered on S^1 covers a third
    grid = GridSpec2D(512, 512, -1, 1, -1, 1)
    xs = grid.x_centers()[None, :]
    ys = grid.y_centers()[:, None]
    fld = ScalarField2D(grid, (xs * xs + ys * ys < 1.0).astype(float))
    sg = SinogramGrid(0.0, math.pi / 2, 2, 2.0, 2)  # radii {1, 2}
    sino = forward_circular_numeric(fld, sg, 2048)
    assert abs(sino.values[0, 0] - 1.0 / 3.0) < 5e-3


def test_forward_matches_analytic():
    ph = DiscPhantom2D((Disc(0.0, 0.0, 0.5, 1.0),))
    grid = GridSpec2D(256, 256, -1, 1, -1, 1)
    sg = SinogramGrid(0.0, math.pi, 90, 2.0, 128)
    num = forward_circular_numeric(rasterize2d(ph, grid), sg, 1024)
    ana = analytic_circular_sinogram(ph, sg)
    rms = math.sqrt(float(np.mean((num.values - ana.values) ** 2)))
    assert rms < 2e-3


def test_forward_linearity():
    grid = GridSpec2D(64, 64, -1, 1, -1, 1)
    sg = SinogramGrid(0, math.pi, 12, 2.0, 24)
    f1 = gaussian_field(grid, [(0.2, 0.1, 0.2, 1.0)])
    f2 = gaussian_field(grid, [(-0.3, 0.0, 0.15, 0.7)])
    s12 = forward_circular_numeric(
        ScalarField2D(grid, f1.values + f2.values), sg, 256
    )
    s1 = forward_circular_numeric(f1, sg, 256)
    s2 = forward_circular_numeric(f2, sg, 256)
    assert np.allclose(s12.values, s1.values + s2.values, atol=1e-12)


def test_forward_rotation_equivariance():
    # rotating the scene by 90 degrees shifts the view angle by 90 degrees
    grid = GridSpec2D(256, 256, -1, 1, -1, 1)
    h = gaussian_field(grid, [(0.3, 0.1, 0.18, 1.0), (-0.2, -0.25, 0.1, 0.6)])
    xs = grid.x_centers()[None, :]
    ys = grid.y_centers()[:, None]
    rot = np.zeros((grid.ny, grid.nx))
    for cx, cy, s, a in [(0.3, 0.1, 0.18, 1.0), (-0.2, -0.25, 0.1, 0.6)]:
        # h_rot(x, y) = h(y, -x)
        rot += a * np.exp(-((ys - cx) ** 2 + (-xs - cy) ** 2) / (2 * s * s))
    sg = SinogramGrid(0.0, 2.0 * math.pi, 361, 2.0, 128)
    s = forward_circular_numeric(h, sg, 512)
    sr = forward_circular_numeric(ScalarField2D(grid, rot), sg, 512)
    assert np.max(np.abs(sr.values[90:360] - s.values[0:270])) < 1e-3


def test_backproject_ones_at_center():
    # g = 1 on the full circle: M*g = 1 at the origin
    sg = SinogramGrid(0.0, 2.0 * math.pi, 721, 2.0, 400)
    sino = Sinogram(sg, np.ones((721, 400)))
    grid = GridSpec2D(32, 32, -1, 1, -1, 1)
    img = backproject_circular(sino, grid)
    j = i = 16  # pixel center (0.03125, 0.03125), distance to S^1 within 1e-3 of 1
    assert abs(img.values[j, i] - 1.0) < 0.02


def test_backproject_zero_and_linearity():
    sg = SinogramGrid(0, math.pi, 16, 2.0, 32)
    grid = GridSpec2D(24, 24, -1, 1, -1, 1)
    z = backproject_circular(Sinogram(sg, np.zeros((16, 32))), grid)
    assert np.all(z.values == 0)
    gen = np.random.default_rng(5)
    g1 = Sinogram(sg, gen.normal(size=(16, 32)))
    g2 = Sinogram(sg, gen.normal(size=(16, 32)))
    b12 = backproject_circular(Sinogram(sg, g1.values + g2.values), grid)
    b1 = backproject_circular(g1, grid)
    b2 = backproject_circular(g2, grid)
    assert np.allclose(b12.values, b1.values + b2.values, atol=1e-12)


def test_adjoint_identity_small():
    grid = GridSpec2D(128, 128, -1, 1, -1, 1)
    sg = SinogramGrid(0.0, 2.0 * math.pi, 180, 2.0, 128)
    f = gaussian_field(grid, [(0.1, -0.2, 0.2, 1.0), (-0.3, 0.3, 0.15, 0.8)])
    rs = sg.rs()[None, :]
    phis = sg.phis()[:, None]
    g = np.exp(-((rs - 1.0) ** 2) / 0.18) * (1.0 + np.cos(3.0 * phis)) / 2.0
    sino_g = Sinogram(sg, g)
    Mf = forward_circular_numeric(f, sg, 512)
    Mtg = backproject_circular(sino_g, grid)
    lhs = float(np.sum(Mf.values * g)) * sg.dphi * sg.dr
    rhs = float(np.sum(f.values * Mtg.values)) * grid.dx * grid.dy
    scale = math.sqrt(float(np.sum(Mf.values**2)) * sg.dphi * sg.dr) * math.sqrt(
        float(np.sum(g**2)) * sg.dphi * sg.dr
    )
    assert abs(lhs - rhs) / scale < 0.01


def make_sino(vals, rmax=2.0):
    nphi, nr = vals.shape
    sg = SinogramGrid(0, math.pi, nphi, rmax, nr)
    return Sinogram(sg, vals)


def test_radial_filter_linear_ramp():
    sg = SinogramGrid(0, math.pi, 4, 2.0, 16)
    r = sg.rs()
    sino = Sinogram(sg, np.tile(r, (4, 1)))
    out = radial_filter(sino, 1)
    assert np.allclose(out.values[:, 1:-1], 1.0, atol=1e-12)


def test_radial_filter_quadratic():
    sg = SinogramGrid(0, math.pi, 4, 2.0, 16)
    r = sg.rs()
    sino = Sinogram(sg, np.tile(r * r, (4, 1)))
    out = radial_filter(sino, 2)
    assert np.allclose(out.values[:, 1:-1], -2.0, atol=1e-9)


def test_radial_filter_constant_and_errors():
    sino = make_sino(np.full((4, 16), 3.7))
    assert np.allclose(radial_filter(sino, 1).values[:, 1:-1], 0.0, atol=1e-12)
    assert np.allclose(radial_filter(sino, 2).values[:, 1:-1], 0.0, atol=1e-12)
    with pytest.raises(ValueError):
        radial_filter(sino, 3)
    with pytest.raises(ValueError):
        radial_filter(make_sino(np.zeros((4, 2))), 1)
