"""Exponential-polynomial reduction of the ansatz and its numerical solver."""

from .laurent import LaurentPoly, RationalHyperbolic
from .newton import multistart, newton_solve
from .system import (
    CandidateVector,
    SystemValues,
    compare_with_printed_system,
    extract_system,
)

__all__ = [
    "CandidateVector",
    "LaurentPoly",
    "RationalHyperbolic",
    "SystemValues",
    "compare_with_printed_system",
    "extract_system",
    "multistart",
    "newton_solve",
]
