"""Reconfigurable magnon-photon beam splitter: simulation and analysis.

The package models a probe photon and a collective spin excitation coupled
through an atomic ensemble, exposes the 2x2 transfer matrix of the
equivalent beam splitter, an effective-Hamiltonian propagator, a write /
split / read interferometer protocol, a sliced-ensemble cascade model, and
fitting tools (sinusoid, ellipse) for extracting the relative fringe phase.
"""

__version__ = "0.1.0"

from .analysis import (AnalysisError, DegenerateDataError, EllipseFit,
                       LowVisibilityError, NearDegenerateWarning,
                       SinusoidFit, delta_from_conic, fit_ellipse,
                       fit_sinusoid, fringe_phase_difference,
                       pearson_correlation)
from .cascade import (CascadeModel, OdPhasePoint, build_cascade,
                      cascade_fringe_scan, cascade_interfere, phase_vs_od,
                      prepare_magnon_profile)
from .core import (DimensionlessCoupling, GainRegimeWarning,
                   MatrixDiagnostics, MpbsParams, ParameterError,
                   TransferMatrix, asymptotic_transfer_matrix,
                   build_transfer_matrix, circular_distance,
                   derive_dimensionless, diagnostics, fold_angle,
                   matrix_phase_difference, wrap_angle)
from .hamiltonian import (EffectiveHamiltonian, NormGrowthWarning,
                          ValidityWarning, build_heff, evolve, propagator,
                          swap_basis)
from .interferometer import (FringeSeries, ModeAmplitudes, ProtocolConfig,
                             ProtocolResult, default_protocol, fringe_scan,
                             interfere, match_probe_amplitude,
                             prepare_magnon, readout_magnon, run_protocol,
                             sample_phase_diagram)

__all__ = [
    "__version__",
    "AnalysisError", "DegenerateDataError", "EllipseFit",
    "LowVisibilityError", "NearDegenerateWarning", "SinusoidFit",
    "delta_from_conic", "fit_ellipse", "fit_sinusoid",
    "fringe_phase_difference", "pearson_correlation",
    "CascadeModel", "OdPhasePoint", "build_cascade", "cascade_fringe_scan",
    "cascade_interfere", "phase_vs_od", "prepare_magnon_profile",
    "DimensionlessCoupling", "GainRegimeWarning", "MatrixDiagnostics",
    "MpbsParams", "ParameterError", "TransferMatrix",
    "asymptotic_transfer_matrix", "build_transfer_matrix",
    "circular_distance", "derive_dimensionless", "diagnostics",
    "fold_angle", "matrix_phase_difference", "wrap_angle",
    "EffectiveHamiltonian", "NormGrowthWarning", "ValidityWarning",
    "build_heff", "evolve", "propagator", "swap_basis",
    "FringeSeries", "ModeAmplitudes", "ProtocolConfig", "ProtocolResult",
    "default_protocol", "fringe_scan", "interfere",
    "match_probe_amplitude", "prepare_magnon", "readout_magnon",
    "run_protocol", "sample_phase_diagram",
]
