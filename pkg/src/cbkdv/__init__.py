"""Complex traveling solitary waves of the compound Burgers-KdV equation."""

from .core_model import (
    PhysicalParameters,
    ReducedODECoefficients,
    SignTriple,
    TravelingWaveSolution,
    WaveCoefficients,
    amplitude_balance,
    evaluate,
    kappa,
    relative_ode_residual,
    residual_ode,
    solve_coefficients,
    trivial_solutions,
    valid_sign_triples,
)

__all__ = [
    "PhysicalParameters",
    "ReducedODECoefficients",
    "SignTriple",
    "TravelingWaveSolution",
    "WaveCoefficients",
    "amplitude_balance",
    "evaluate",
    "kappa",
    "relative_ode_residual",
    "residual_ode",
    "solve_coefficients",
    "trivial_solutions",
    "valid_sign_triples",
]
