"""critsim: coupled-cavity reflection, squeezed-noise spectra, and line-shape analysis.

Two optical cavities sharing a middle mirror produce a narrow
transparency window inside the reflection dip of the outer cavity; this
package evaluates that complex reflection response, propagates Gaussian
quadrature noise through the two-sideband reflection channel, classifies
the resulting spectral line shapes, and fits model parameters to
observed spectra.  A command-line interface (``critsim``) exposes
sweeps, classification, fitting, presets, and an invariant suite.
"""

from ._kernels import NUMBA_ENABLED, backend_name
from .analysis import (
    Extremum,
    ExtremumKind,
    ProfileLabel,
    ProfileShape,
    WindowMetrics,
    classify_profile,
    find_extrema,
    window_metrics,
)
from .cavity import (
    SPEED_OF_LIGHT,
    CoupledCavityConfig,
    PhasePair,
    PolarResponse,
    Variant,
    coupled_reflectivity,
    inner_reflectivity,
    round_trip_phase,
    single_cavity_reflectivity,
    to_polar,
)
from .config import (
    PRESET_NAMES,
    BuiltRun,
    RunConfig,
    load_config,
    preset,
    serialize_config,
)
from .covariance import variance_via_covariance
from .errors import DegenerateCavityError, UsageError, ValidationError
from .fit import (
    DEFAULT_BOUNDS,
    PARAM_NAMES,
    FitProblem,
    FitResult,
    ObjectiveDomain,
    ObservedSpectrum,
    fit_parameters,
    residual,
)
from .output import CSV_COLUMNS, read_csv, read_json, write_csv, write_json, write_result
from .quantum import (
    DetectionModel,
    InputGaussianState,
    SidebandResponsePair,
    apply_detection,
    input_from_db,
    input_from_squeeze_factor,
    sideband_pair,
    variance_at_angle,
    variance_to_db,
    variance_x,
    variance_y,
)
from .sweep import (
    ScanMode,
    ScanSpec,
    SweepRecord,
    SweepResult,
    displacement_to_phase,
    frequency_scan,
    intensity_scan,
    mirror_scan,
    scan_detunings,
)

__version__ = "0.1.0"

__all__ = [
    "CSV_COLUMNS",
    "DEFAULT_BOUNDS",
    "NUMBA_ENABLED",
    "PARAM_NAMES",
    "PRESET_NAMES",
    "SPEED_OF_LIGHT",
    "BuiltRun",
    "CoupledCavityConfig",
    "DegenerateCavityError",
    "DetectionModel",
    "Extremum",
    "ExtremumKind",
    "FitProblem",
    "FitResult",
    "InputGaussianState",
    "ObjectiveDomain",
    "ObservedSpectrum",
    "PhasePair",
    "PolarResponse",
    "ProfileLabel",
    "ProfileShape",
    "RunConfig",
    "ScanMode",
    "ScanSpec",
    "SidebandResponsePair",
    "SweepRecord",
    "SweepResult",
    "UsageError",
    "ValidationError",
    "Variant",
    "WindowMetrics",
    "apply_detection",
    "backend_name",
    "classify_profile",
    "coupled_reflectivity",
    "displacement_to_phase",
    "find_extrema",
    "fit_parameters",
    "frequency_scan",
    "inner_reflectivity",
    "input_from_db",
    "input_from_squeeze_factor",
    "intensity_scan",
    "load_config",
    "mirror_scan",
    "preset",
    "read_csv",
    "read_json",
    "residual",
    "round_trip_phase",
    "scan_detunings",
    "serialize_config",
    "sideband_pair",
    "single_cavity_reflectivity",
    "to_polar",
    "variance_at_angle",
    "variance_to_db",
    "variance_via_covariance",
    "variance_x",
    "variance_y",
    "window_metrics",
    "write_csv",
    "write_json",
    "write_result",
]
