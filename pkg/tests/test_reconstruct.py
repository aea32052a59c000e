import math

import numpy as np
import pytest

from lvtomo.circular import radial_filter
from lvtomo.core_io import GridSpec2D, Sinogram, SinogramGrid
from lvtomo.cutoffs import AngularRange, RectCenterSet
from lvtomo.phantoms import (
    Ball,
    BallPhantom3D,
    Disc,
    DiscPhantom2D,
    analytic_circular_sinogram,
    analytic_sonar_data,
)
from lvtomo.reconstruct import (
    PRESETS,
    SONAR_PRESET,
    reconstruct_circular,
    reconstruct_sonar,
)
from lvtomo.spherical import SonarData, SonarGrid


def disc_sinogram(nphi=181, nr=128, full=False):
    hi = 2.0 * math.pi if full else math.pi
    sg = SinogramGrid(0.0, hi, nphi, 2.0, nr)
    ph = DiscPhantom2D((Disc(0.0, 0.0, 0.5, 1.0),))
    return analytic_circular_sinogram(ph, sg)


def test_zero_sinogram_zero_image():
    sg = SinogramGrid(0.0, math.pi, 16, 2.0, 32)
    grid = GridSpec2D(24, 24, -1, 1, -1, 1)
    out = reconstruct_circular(
        Sinogram(sg, np.zeros((16, 32))), AngularRange(0, math.pi), "hard", 2, grid
    )
    assert np.all(out.values == 0)


def test_linearity():
    sino = disc_sinogram(nphi=61, nr=64)
    rng = AngularRange(0.0, math.pi)
    grid = GridSpec2D(32, 32, -1, 1, -1, 1)
    one = reconstruct_circular(sino, rng, "hard", 2, grid)
    two = reconstruct_circular(
        Sinogram(sino.grid, 2.0 * sino.values), rng, "hard", 2, grid
    )
    assert np.allclose(two.values, 2.0 * one.values, atol=1e-12)


def test_pressure_mode():
    sino = disc_sinogram(nphi=61, nr=64)
    rng = AngularRange(0.0, math.pi)
    grid = GridSpec2D(32, 32, -1, 1, -1, 1)
    with pytest.raises(ValueError):
        reconstruct_circular(sino, rng, "hard", 2, grid, pressure_mode=True)
    # p = (1/2) d/dr of the means: pressure mode must match the order-1 pipeline
    pressure = Sinogram(sino.grid, 0.5 * radial_filter(sino, 1).values)
    direct = reconstruct_circular(sino, rng, "hard", 1, grid)
    via_p = reconstruct_circular(pressure, rng, "hard", 1, grid, pressure_mode=True)
    assert np.allclose(via_p.values, direct.values, atol=1e-12)


def test_smooth_matches_hard_for_tiny_eps():
    # range endpoints strictly between angular samples, taper narrower than
    # the angular step: no sample lands on a ramp
    sino = disc_sinogram(nphi=181, nr=96)
    dphi = sino.grid.dphi
    rng = AngularRange(0.5 * dphi, math.pi - 0.5 * dphi)
    grid = GridSpec2D(32, 32, -1, 1, -1, 1)
    hard = reconstruct_circular(sino, rng, "hard", 2, grid)
    smooth = reconstruct_circular(sino, rng, "smooth", 2, grid, eps=0.25 * dphi)
    assert np.max(np.abs(hard.values - smooth.values)) < 1e-6


def test_full_range_rotational_symmetry():
    sino = disc_sinogram(nphi=361, nr=128, full=True)
    grid = GridSpec2D(64, 64, -1, 1, -1, 1)
    rng = AngularRange(0.0, 2.0 * math.pi)
    img = reconstruct_circular(sino, rng, "hard", 1, grid)
    scale = float(np.max(np.abs(img.values)))
    assert np.max(np.abs(img.values - np.rot90(img.values))) < 1e-3 * scale


def test_order2_sign_change_across_edge():
    sino = disc_sinogram(nphi=361, nr=256, full=True)
    grid = GridSpec2D(256, 256, -1, 1, -1, 1)
    rng = AngularRange(0.0, 2.0 * math.pi)
    img = reconstruct_circular(sino, rng, "hard", 2, grid)

    def sample(px, py):
        i = int(round((px - grid.xmin) / grid.dx - 0.5))
        j = int(round((py - grid.ymin) / grid.dy - 0.5))
        return img.values[j, i]

    for t in 2.0 * math.pi * np.arange(8) / 8.0:
        inner = sample(0.5 * math.cos(t) - 2 * grid.dx * math.cos(t),
                       0.5 * math.sin(t) - 2 * grid.dy * math.sin(t))
        outer = sample(0.5 * math.cos(t) + 2 * grid.dx * math.cos(t),
                       0.5 * math.sin(t) + 2 * grid.dy * math.sin(t))
        assert inner * outer < 0.0


def test_reconstruct_sonar_zero_and_linearity():
    sg = SonarGrid(-2, 2, -2, 2, 5, 5, 6.0, 24)
    K = RectCenterSet(0, 0, 2, 2)
    plane = SONAR_PRESET.plane()
    grid = GridSpec2D(16, 16, -1, 1, 0.5, 2.5)
    zero = reconstruct_sonar(SonarData(sg, np.zeros((5, 5, 24))), K, "hard", 2, plane, grid)
    assert np.all(zero.values == 0)
    ph = BallPhantom3D((Ball(0.0, 0.0, 1.5, 0.5, 1.0),))
    data = analytic_sonar_data(ph, sg)
    one = reconstruct_sonar(data, K, "hard", 2, plane, grid)
    three = reconstruct_sonar(SonarData(sg, 3.0 * data.values), K, "hard", 2, plane, grid)
    assert np.allclose(three.values, 3.0 * one.values, atol=1e-10)


def test_presets():
    assert set(PRESETS) == {"fig1", "fig3", "real"}
    fig1 = PRESETS["fig1"]
    assert fig1.nphi == 361 and fig1.nr == 725
    rng = fig1.angular_range()
    assert abs(rng.a - math.radians(25.0)) < 1e-12
    assert abs(rng.b - math.radians(155.0)) < 1e-12
    fig3 = PRESETS["fig3"]
    assert fig3.nphi == 750 and fig3.eps_deg == 18.0
    sg = fig3.sinogram_grid()
    assert sg.nphi == 750 and sg.nr == 725 and sg.rmax == 2.0
    assert SONAR_PRESET.sonar_grid().ny1 == 33
    assert SONAR_PRESET.sonar_grid().nr == 128
    assert SONAR_PRESET.plane().axis == 1
    assert SONAR_PRESET.plane().offset == 0.125
