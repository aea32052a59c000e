"""End-to-end Lambda-type reconstruction pipelines.

Both pipelines apply a cutoff to the data, a radial derivative filter, and
the dual transform, in that order: cutoff, then d/dr or -d^2/dr^2, then
backprojection.  Edge maps come out, not density values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .circular import backproject_circular, radial_filter
from .core_io import GridSpec2D, ScalarField2D, Sinogram, SinogramGrid
from .cutoffs import AngularRange, CenterSet, apply_angular_cutoff, apply_center_cutoff
from .spherical import SlicePlane, SonarData, SonarGrid, backproject_spherical_slice


def reconstruct_circular(
    sino: Sinogram,
    rng: AngularRange,
    cutoff: str,
    order: int,
    grid: GridSpec2D,
    eps: float | None = None,
    pressure_mode: bool = False,
) -> ScalarField2D:
    """Lambda reconstruction M* P K M for circular mean data.

    In pressure mode the input is assumed to already equal (1/2) d/dr of the
    circular means, so the radial filter is replaced by a factor of 2; this
    only makes sense for the first-order operator.
    """
    if pressure_mode and order != 1:
        raise ValueError("pressure_mode requires order 1")
    cut = apply_angular_cutoff(sino, rng, mode=cutoff, eps=eps)
    if pressure_mode:
        filtered = Sinogram(cut.grid, 2.0 * cut.values)
    else:
        filtered = radial_filter(cut, order)
    return backproject_circular(filtered, grid)


def reconstruct_sonar(
    data: SonarData,
    K: CenterSet,
    cutoff: str,
    order: int,
    plane: SlicePlane,
    grid: GridSpec2D,
    eps: float | None = None,
) -> ScalarField2D:
    """Slice Lambda reconstruction M_S* P K M_S for spherical mean data."""
    cut = apply_center_cutoff(data, K, mode=cutoff, eps=eps)
    filtered = radial_filter(cut, order)
    return backproject_spherical_slice(filtered, plane, grid)


@dataclass(frozen=True)
class CircularPreset:
    range_deg: tuple[float, float]
    nphi: int
    nr: int
    eps_deg: float | None

    def angular_range(self) -> AngularRange:
        return AngularRange(math.radians(self.range_deg[0]), math.radians(self.range_deg[1]))

    def sinogram_grid(self, rmax: float = 2.0) -> SinogramGrid:
        # projections sampled over [a, b] itself, matching the published counts
        a, b = self.range_deg
        return SinogramGrid(math.radians(a), math.radians(b), self.nphi, rmax, self.nr)


# published figure configurations: a narrow limited view, and a half view
# with its smooth-taper width; real transducer data used a 45 degree taper
PRESETS = {
    "fig1": CircularPreset(range_deg=(25.0, 155.0), nphi=361, nr=725, eps_deg=None),
    "fig3": CircularPreset(range_deg=(0.0, 180.0), nphi=750, nr=725, eps_deg=18.0),
    "real": CircularPreset(range_deg=(0.0, 180.0), nphi=750, nr=725, eps_deg=45.0),
}


@dataclass(frozen=True)
class SonarPreset:
    half_width: float
    ny: int
    nr: int
    rmax: float
    slice_axis: int
    slice_offset: float
    eps: float

    def sonar_grid(self) -> SonarGrid:
        h = self.half_width
        return SonarGrid(-h, h, -h, h, self.ny, self.ny, self.rmax, self.nr)

    def plane(self) -> SlicePlane:
        return SlicePlane(self.slice_axis, self.slice_offset)


# desk-scale analogue of the published sonar configuration (which used
# K = [-12,12]^2 and balls at heights 3 and 4): same geometry, smaller K
SONAR_PRESET = SonarPreset(
    half_width=3.0, ny=33, nr=128, rmax=7.0,
    slice_axis=1, slice_offset=0.125, eps=0.75,
)
