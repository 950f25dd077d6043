"""Spectral free-surface recovery for solitary waves from bed-pressure data,
with perturbation-error diagnostics."""

from .grid_spectral import (
    Grid,
    HermitianSymmetryError,
    RealField,
    Spectrum,
    apply_cosh_multiplier,
    apply_sinh_multiplier,
    forward_transform,
    inverse_transform,
    l2_norm,
    make_grid,
    spectral_cutoff,
)
from .wave_model import (
    ZERO_PERTURBATION,
    AdmissibilityError,
    AdmissibilityReport,
    PerturbationSpec,
    PhysicalParams,
    PressureTrace,
    check_admissibility,
    delta_field,
    load_pressure_csv,
    paper_pressure_trace,
    pressure_from_g,
)
from .reconstruction import (
    ReconstructionResult,
    compute_g,
    linear_baseline_eta,
    reconstruct_eta,
    reconstruct_full,
    reconstruct_x,
)
from .error_analysis import (
    BoundInputs,
    DecayFit,
    ExponentFit,
    error_E,
    error_split,
    evaluate_bound,
    fit_decay,
    fit_exponent,
)

__version__ = "0.1.0"
