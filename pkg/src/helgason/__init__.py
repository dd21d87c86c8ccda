"""Quantitative tools for plane-integral transforms with restricted data.

The package chains four layers: synthetic phantoms with certified support
metadata, the translated plane transform sampled on (offset, direction)
grids, the Gaussian wavepacket transform with a kernel representation that
reads transform values straight off the sinogram, and a stability layer
(growth bound, rectangle subharmonic certificate, refined power bound,
Gaussian deconvolution, logarithmic stability) whose existential constants
are frozen by a one-time calibration run and re-checked as regressions.
"""

from . import geometry
from ._backend import BACKEND_NAME
from .bargmann import (
    BargmannSample,
    ComplexPoint,
    FitResult,
    fit_exponential_smallness,
    growth_bound_check,
    hermite_coefficient_bound,
    hermite_he_values,
    hermite_q,
    kernel_bound,
    kernel_g,
    kernel_matrix,
    sb_direct,
    sb_from_radon,
    sb_from_radon_weighted,
    sb_sample,
    sb_weighted,
    sb_weighted_batch,
    support_side_bound_check,
)
from .constants import Constants, constants_version, get_constants
from .errors import CalibrationError, ValidationError
from .phantoms import (
    Halfspace,
    PhantomSpec,
    SampledField,
    besov_seminorm,
    lp_norm,
    make_phantom,
    weighted_moment,
)
from .radon import (
    RestrictedWindow,
    Sinogram,
    default_s_grid,
    l1_sinogram_bound_check,
    radon,
    radon_sobolev_norm,
    restricted_integral,
    riesz_filter,
    riesz_pairing,
    sobolev_energy_raw,
    x_norm,
)
from .stability import (
    AdmissibleRegion,
    CertificateResult,
    ExperimentConfig,
    RectangleDomain,
    RefinedBound,
    StabilityReport,
    build_phi,
    certificate_domain,
    comparison_harmonic,
    default_certificate_grid,
    gaussian_deconv_bound,
    helgason_rhs,
    refined_bound,
    run_experiment,
    stability_bound,
    subharmonic_certificate,
    window_scales,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "AdmissibleRegion",
    "BargmannSample",
    "CalibrationError",
    "CertificateResult",
    "ComplexPoint",
    "Constants",
    "ExperimentConfig",
    "FitResult",
    "Halfspace",
    "PhantomSpec",
    "RectangleDomain",
    "RefinedBound",
    "RestrictedWindow",
    "SampledField",
    "Sinogram",
    "StabilityReport",
    "ValidationError",
    "besov_seminorm",
    "build_phi",
    "certificate_domain",
    "comparison_harmonic",
    "constants_version",
    "default_certificate_grid",
    "default_s_grid",
    "fit_exponential_smallness",
    "gaussian_deconv_bound",
    "geometry",
    "get_constants",
    "growth_bound_check",
    "helgason_rhs",
    "hermite_coefficient_bound",
    "hermite_he_values",
    "hermite_q",
    "kernel_bound",
    "kernel_g",
    "kernel_matrix",
    "l1_sinogram_bound_check",
    "lp_norm",
    "make_phantom",
    "radon",
    "radon_sobolev_norm",
    "refined_bound",
    "restricted_integral",
    "riesz_filter",
    "riesz_pairing",
    "run_experiment",
    "sb_direct",
    "sb_from_radon",
    "sb_from_radon_weighted",
    "sb_sample",
    "sb_weighted",
    "sb_weighted_batch",
    "sobolev_energy_raw",
    "stability_bound",
    "subharmonic_certificate",
    "support_side_bound_check",
    "weighted_moment",
    "window_scales",
    "x_norm",
]
