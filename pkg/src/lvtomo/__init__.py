"""Limited-view tomography for circular and spherical mean transforms.

Simulation, Lambda-type reconstruction under hard or smooth data cutoffs,
geometric prediction of limited-data artifacts, and metrics that verify the
prediction against the reconstruction.
"""

from .core_io import (
    FileFormatError,
    GridSpec2D,
    NonFiniteDataError,
    PayloadLengthError,
    ScalarField2D,
    Sinogram,
    SinogramGrid,
    export_pgm,
    read_field,
    read_sinogram,
    write_field,
    write_sinogram,
)
from .cutoffs import (
    AngularRange,
    DiscCenterSet,
    RectCenterSet,
    angular_cutoff_value,
    apply_angular_cutoff,
    apply_center_cutoff,
    center_cutoff_value,
    nu_eps,
)
from .circular import backproject_circular, forward_circular_numeric, radial_filter
from .microlocal import (
    ArtifactCurveSet,
    Covector2D,
    Covector3D,
    DataCovectorSonar,
    Mask2D,
    is_visible_circular,
    is_visible_sonar,
    predicted_artifact_circles,
    predicted_artifact_curves_sonar,
    rasterize_mask,
    ray_circle_angles,
    sonar_cov_to_data,
    sonar_data_to_cov,
)
from .phantoms import (
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
from .reconstruct import PRESETS, SONAR_PRESET, reconstruct_circular, reconstruct_sonar
from .spherical import (
    SlicePlane,
    SonarData,
    SonarGrid,
    backproject_spherical_slice,
    forward_spherical_numeric,
    read_sonar_data,
    write_sonar_data,
)

__version__ = "0.1.0"
