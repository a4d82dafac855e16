"""Coherent states for the non-degenerate fourth-order oscillator: one
ordinary mode minus one ghost mode, with closed-form moments verified
against truncated number-basis and classical-trajectory oracles."""

from .classical import (
    ClassicalInit,
    Trajectory,
    analytic_solution,
    integrate,
    match_expectation,
)
from .gcs import (
    GcsLabel,
    MomentSet,
    OscillatorSpec,
    TruncationError,
    build_state,
    coherent_parameter,
    first_moments,
    gcs_energy,
    second_moments_and_dispersions,
    truncation_for,
)
from .modes import (
    ModePhasePoint,
    PuoParams,
    PuoPhasePoint,
    forward,
    hamiltonian_modes,
    hamiltonian_puo,
    inverse,
    symplectic_residual,
)
from .puo import (
    MomentReport,
    PuoStateLabel,
    asymptotic_product,
    closed_moments,
    constraint_residual,
    energy_positivity,
    numeric_moments,
)

__version__ = "0.1.0"

__all__ = [
    "ClassicalInit",
    "GcsLabel",
    "MomentReport",
    "MomentSet",
    "ModePhasePoint",
    "OscillatorSpec",
    "PuoParams",
    "PuoPhasePoint",
    "PuoStateLabel",
    "Trajectory",
    "TruncationError",
    "analytic_solution",
    "asymptotic_product",
    "build_state",
    "closed_moments",
    "coherent_parameter",
    "constraint_residual",
    "energy_positivity",
    "first_moments",
    "forward",
    "gcs_energy",
    "hamiltonian_modes",
    "hamiltonian_puo",
    "integrate",
    "inverse",
    "match_expectation",
    "numeric_moments",
    "second_moments_and_dispersions",
    "symplectic_residual",
    "truncation_for",
]
