import math

import numpy as np
import pytest

from lvtomo.core_io import GridSpec2D, SinogramGrid
from lvtomo.phantoms import (
    Ball,
    BallPhantom3D,
    Disc,
    DiscPhantom2D,
    analytic_circular_sinogram,
    analytic_sonar_data,
    circular_mean_disc,
    load_phantom,
    rasterize2d,
    save_phantom,
    spherical_mean_ball,
)
from lvtomo.spherical import SonarGrid


def quadrature_circular_mean(c, rho, phi, r, n):
    """Independent oracle: angular quadrature of the disc indicator."""
    psi = 2.0 * math.pi * (np.arange(n) + 0.5) / n
    px = math.cos(phi) + r * np.cos(psi)
    py = math.sin(phi) + r * np.sin(psi)
    return float(np.mean((px - c[0]) ** 2 + (py - c[1]) ** 2 < rho * rho))


def mc_spherical_mean(c, rho, y, r, n, seed):
    """Independent oracle: Monte Carlo over uniform sphere points."""
    gen = np.random.default_rng(seed)
    u = gen.normal(size=(n, 3))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    p = np.array([y[0], y[1], 0.0]) + r * u
    inside = np.sum((p - np.asarray(c)) ** 2, axis=1) < rho * rho
    return float(np.mean(inside))


def test_phantom_validation():
    with pytest.raises(ValueError):
        DiscPhantom2D((Disc(0.6, 0.0, 0.5, 1.0),))  # leaves the unit disk
    with pytest.raises(ValueError):
        DiscPhantom2D((Disc(0.0, 0.0, -0.1, 1.0),))
    with pytest.raises(ValueError):
        BallPhantom3D((Ball(0.0, 0.0, 1.0, 1.0, 1.0),))  # touches x3 = 0
    DiscPhantom2D((Disc(0.4, 0.0, 0.5, 1.0),))
    BallPhantom3D((Ball(0.0, 0.0, 1.1, 1.0, 1.0),))


def test_circular_mean_containment_and_disjoint():
    assert circular_mean_disc((0.6, 0.0), 0.5, 0.0, 0.05) == 1.0
    assert circular_mean_disc((0.0, 0.0), 0.5, 0.0, 0.4) == 0.0
    # circle strictly larger than and enclosing the disc
    assert circular_mean_disc((0.9, 0.0), 0.05, 0.0, 0.5) == 0.0


def test_circular_mean_partial_arc():
    val = circular_mean_disc((0.0, 0.0), 0.5, 0.0, 1.0)
    assert abs(val - math.acos(0.875) / math.pi) < 1e-12
    oracle = quadrature_circular_mean((0.0, 0.0), 0.5, 0.0, 1.0, 1_000_000)
    assert abs(val - oracle) < 1e-3


def test_circular_mean_matches_quadrature_random():
    gen = np.random.default_rng(7)
    for _ in range(100):
        ang = gen.uniform(0, 2 * math.pi)
        s = gen.uniform(0, 0.6)
        c = (s * math.cos(ang), s * math.sin(ang))
        rho = gen.uniform(0.05, 0.99 - s)
        phi = gen.uniform(0, 2 * math.pi)
        r = gen.uniform(0.05, 2.0)
        val = circular_mean_disc(c, rho, phi, r)
        assert 0.0 <= val <= 1.0
        assert abs(val - quadrature_circular_mean(c, rho, phi, r, 100_000)) < 1e-3


def test_circular_mean_rotation_equivariance():
    gen = np.random.default_rng(11)
    for _ in range(50):
        ang = gen.uniform(0, 2 * math.pi)
        s = gen.uniform(0, 0.5)
        c = (s * math.cos(ang), s * math.sin(ang))
        rho = gen.uniform(0.05, 0.45)
        phi = gen.uniform(0, 2 * math.pi)
        r = gen.uniform(0.05, 2.0)
        w = gen.uniform(0, 2 * math.pi)
        rc = (
            c[0] * math.cos(w) - c[1] * math.sin(w),
            c[0] * math.sin(w) + c[1] * math.cos(w),
        )
        a = circular_mean_disc(c, rho, phi, r)
        b = circular_mean_disc(rc, rho, phi + w, r)
        assert abs(a - b) < 1e-12


def test_spherical_mean_values():
    # ball centered (0,0,3), probe sphere through its center
    assert abs(spherical_mean_ball((0, 0, 3), 1.0, (0, 0), 3.0) - 1.0 / 36.0) < 1e-12
    assert spherical_mean_ball((0, 0, 3), 1.0, (0, 0), 1.5) == 0.0
    assert abs(spherical_mean_ball((0, 1, 4), 1.0, (0, 1), 4.0) - 1.0 / 64.0) < 1e-12
    # containment: small sphere inside a big ball
    assert spherical_mean_ball((0.1, 0, 1), 5.0, (0, 0), 0.5) == 1.0


def test_spherical_mean_matches_monte_carlo():
    gen = np.random.default_rng(3)
    for k in range(20):
        c = (gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(1.0, 3.0))
        rho = gen.uniform(0.2, min(0.8, c[2] - 0.1))
        y = (gen.uniform(-1, 1), gen.uniform(-1, 1))
        r = gen.uniform(0.5, 5.0)
        val = spherical_mean_ball(c, rho, y, r)
        n = 100_000
        mc = mc_spherical_mean(c, rho, y, r, n, seed=100 + k)
        se = math.sqrt(max(val * (1 - val), 1e-12) / n)
        assert abs(val - mc) <= 4.0 * se + 1e-6


def test_spherical_mean_max_radius():
    # the cap fraction at fixed y peaks at r = sqrt(d^2 - rho^2), the radius
    # of the sphere internally tangent to the cone of tangent lines from y
    c, rho, y = (0.0, 0.0, 3.0), 1.0, (0.0, 0.0)
    d = 3.0
    rs = np.linspace(0.5, 5.0, 20001)
    vals = np.array([spherical_mean_ball(c, rho, y, r) for r in rs])
    r_star = rs[np.argmax(vals)]
    assert abs(r_star - math.sqrt(d * d - rho * rho)) < 2e-3


def test_rasterize2d():
    grid = GridSpec2D(64, 64, -1, 1, -1, 1)
    empty = rasterize2d(DiscPhantom2D(()), grid)
    assert np.all(empty.values == 0)
    big = rasterize2d(DiscPhantom2D((Disc(0, 0, 0.999, 2.0),)), GridSpec2D(8, 8, -0.2, 0.2, -0.2, 0.2))
    assert np.all(big.values == 2.0)
    fine = GridSpec2D(256, 256, -1, 1, -1, 1)
    fld = rasterize2d(DiscPhantom2D((Disc(0, 0, 0.5, 1.0),)), fine)
    area = float(fld.values.sum()) * fine.dx * fine.dy
    assert abs(area - math.pi * 0.25) / (math.pi * 0.25) < 0.01


def test_analytic_sinogram():
    sg = SinogramGrid(0.0, math.pi, 16, 2.0, 32)
    assert np.all(analytic_circular_sinogram(DiscPhantom2D(()), sg).values == 0)
    ph1 = DiscPhantom2D((Disc(0.1, 0.2, 0.3, 1.0),))
    ph3 = DiscPhantom2D((Disc(0.1, 0.2, 0.3, 3.0),))
    s1 = analytic_circular_sinogram(ph1, sg)
    s3 = analytic_circular_sinogram(ph3, sg)
    assert np.allclose(s3.values, 3.0 * s1.values, atol=1e-14)
    # near-full disc: g(phi, 1) tends to arccos(1/2)/pi = 1/3
    val = circular_mean_disc((0.0, 0.0), 1.0 - 1e-9, 0.0, 1.0)
    assert abs(val - 1.0 / 3.0) < 1e-6


def test_analytic_sonar_data():
    sg = SonarGrid(-1.0, 1.0, -1.0, 1.0, 3, 3, 6.0, 24)
    assert np.all(analytic_sonar_data(BallPhantom3D(()), sg).values == 0)
    ph = BallPhantom3D((Ball(0, 0, 3, 1.0, 1.0), Ball(0, 1, 4, 1.0, 1.0)))
    data = analytic_sonar_data(ph, sg)
    iy = 1  # y = (0, 0)
    ir = 11  # r = 3
    assert abs(sg.rs()[ir] - 3.0) < 1e-12
    # second ball sits at distance sqrt(17) > 3 + 1 from (0,0,0): no contribution
    assert abs(data.values[iy, iy, ir] - 1.0 / 36.0) < 1e-12


def test_phantom_file_round_trip(tmp_path):
    ph = DiscPhantom2D((Disc(0.1, -0.2, 0.3, 1.5),))
    path = tmp_path / "p.json"
    save_phantom(ph, path)
    assert load_phantom(path) == ph
    bp = BallPhantom3D((Ball(0, 0.5, 2, 0.5, 1.0),))
    path2 = tmp_path / "b.json"
    save_phantom(bp, path2)
    assert load_phantom(path2) == bp
    bad = tmp_path / "bad.json"
    bad.write_text('{"nothing": []}\n')
    with pytest.raises(ValueError):
        load_phantom(bad)
