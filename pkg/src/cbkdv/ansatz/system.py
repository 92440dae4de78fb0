"""Reduction of the reduced ODE under the tanh/sech ansatz to seven algebraic
conditions P_0..P_6 (coefficients of E**k after clearing denominators)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core_model import PhysicalParameters, ReducedODECoefficients, WaveCoefficients
from ..errors import DegenerateWidth, NonvanishingStrayTerms
from .laurent import RationalHyperbolic

NUM_EQUATIONS = 7
# after multiplying through by (E + 1/E)**3 * E**3
CLEARING_POWER = 3
STRAY_TOL = 1e-12


@dataclass(frozen=True)
class CandidateVector:
    """The five unknowns of the algebraic system.

    ``D1_real`` is only used by the full-complex search mode and is zero
    otherwise.
    """

    B0: float
    B1: float
    C1: float
    D1_imag: float
    v: float
    D1_real: float = 0.0

    @property
    def D1(self) -> complex:
        return complex(self.D1_real, self.D1_imag)

    @classmethod
    def from_coefficients(cls, coeffs: WaveCoefficients) -> "CandidateVector":
        return cls(coeffs.B0, coeffs.B1, coeffs.C1, coeffs.D1.imag, coeffs.v, coeffs.D1.real)

    def to_array(self, complex_d1: bool = False) -> np.ndarray:
        base = [self.B0, self.B1, self.C1, self.D1_imag, self.v]
        if complex_d1:
            base.append(self.D1_real)
        return np.array(base, dtype=float)

    @classmethod
    def from_array(cls, x) -> "CandidateVector":
        x = [float(val) for val in x]
        return cls(*x[:5], D1_real=x[5] if len(x) > 5 else 0.0)

    def canonical(self) -> "CandidateVector":
        """Representative with C1 >= 0 under (C1, B1) -> (-C1, -B1)."""
        if self.C1 < 0:
            return CandidateVector(self.B0, -self.B1, -self.C1, self.D1_imag, self.v, self.D1_real)
        return self

    def as_dict(self) -> dict:
        return {
            "B0": self.B0,
            "B1": self.B1,
            "C1": self.C1,
            "D1": {"re": self.D1_real, "im": self.D1_imag},
            "v": self.v,
        }


@dataclass(frozen=True)
class SystemValues:
    """P_k for k = 0..6 and the largest single-term coefficient seen."""

    p: np.ndarray
    scale: float

    def max_abs(self) -> float:
        return float(np.abs(self.p).max())

    def relative(self) -> float:
        if self.scale == 0:
            return 0.0
        return self.max_abs() / self.scale

    def as_dict(self) -> dict:
        return {
            "P": [{"k": k, "re": z.real, "im": z.imag} for k, z in enumerate(self.p)],
            "scale": self.scale,
            "max_abs": self.max_abs(),
            "relative": self.relative(),
        }


def ansatz_terms(candidate: CandidateVector, params: PhysicalParameters, check_width=True):
    """The five ODE terms as rational functions of E, in the order
    u'', r*u', a*u**3, b*u**2, c*u."""
    C1 = candidate.C1
    if check_width and C1 == 0:
        raise DegenerateWidth("C1 = 0 makes the ansatz constant")
    ode = ReducedODECoefficients.from_params(params, candidate.v)
    u = (
        RationalHyperbolic.constant(candidate.B0)
        + RationalHyperbolic.tanh() * candidate.B1
        + RationalHyperbolic.sech() * candidate.D1
    )
    du = u.derivative(C1)
    d2u = du.derivative(C1)
    return [d2u, du * ode.r, (u**3) * ode.a, (u**2) * ode.b, u * ode.c]


def extract_system(
    candidate: CandidateVector, params: PhysicalParameters, *, check_width: bool = True
) -> SystemValues:
    """Coefficients of E**0..E**6 of the ODE left side times (E+1/E)**3 * E**3.

    ``check_width=False`` lets C1 = 0 through; the solver needs that to
    evaluate at degenerate points.
    """
    terms = ansatz_terms(candidate, params, check_width)
    cleared = [t.raised_to(CLEARING_POWER).numerator.shift(CLEARING_POWER) for t in terms]
    scale = max(t.max_abs() for t in cleared)
    total = cleared[0]
    for t in cleared[1:]:
        total = total + t
    p = np.array([total.coeff(k) for k in range(NUM_EQUATIONS)], dtype=complex)
    bound = STRAY_TOL * max(scale, float(np.abs(p).max()))
    stray = {k: c for k, c in total.terms.items() if not 0 <= k < NUM_EQUATIONS}
    if any(abs(c) > bound for c in stray.values()):
        raise NonvanishingStrayTerms(f"exponents outside 0..6 survive: {sorted(stray)}")
    return SystemValues(p=p, scale=float(scale))


def printed_system(candidate: CandidateVector, params: PhysicalParameters) -> np.ndarray:
    """P_0..P_6 exactly as transcribed from the reference algebraic system.

    Kept verbatim, including any transcription errors; never used as an
    authority.
    """
    B0, B1, C1, D1, v = candidate.B0, candidate.B1, candidate.C1, candidate.D1, candidate.v
    al, be, mu, s = params.alpha, params.beta, params.mu, params.s
    P0 = (
        -24 * v * B0 + 12 * al * B0**2 - 8 * be * B0**3 + 24 * mu * B1 * C1
        - 24 * v * D1 + 24 * al * B0 * D1 + 24 * be * B0**2 * D1
        - 24 * s * C1**2 * D1 + 12 * al * D1**2 + 24 * be * B0 * D1**2 + 8 * be * D1**3
    )
    P1 = (
        -6 * v * D1 + 6 * al * B0 * D1 + 6 * be * B0**2 * D1 - 6 * al * B1 * D1
        - 12 * be * B0 * B1 * D1 + 6 * be * B1**2 * D1 + 6 * mu * C1 * D1 + 6 * s * C1**2 * D1
    )
    P2 = (
        -9 * v * B0 + 9 * al * B0**2 / 2 + 3 * be * B0**3 + 3 * v * B1
        - 3 * al * B0 * B1 - 3 * be * B0**2 * B1 - 3 * al * B1**2 / 2
        - 3 * be * B0 * B1**2 + 3 * be * B1**3 + 12 * mu * B1 * C1 + 24 * s * B1 * C1**2
        + 6 * al * D1**2 + 12 * be * B0 * D1**2 - 12 * be * B1 * D1**2
    )
    P3 = (
        -12 * v * D1 + 12 * al * B0 * D1 + 12 * be * B0**2 * D1 - 12 * be * B1**2 * D1
        - 36 * s * C1**2 * D1 + 8 * be * D1**3
    )
    P4 = (
        -9 * v * B0 + 9 * al * B0**2 / 2 + 3 * be * B0**3 - 3 * v * B1
        + 3 * al * B0 * B1 + 3 * be * B0**2 * B1 - 3 * al * B1**2 / 2
        - 3 * be * B0 * B1**2 - 3 * be * B1**3 + 12 * mu * B1 * C1 - 24 * s * B1 * C1**2
        + 6 * al * D1**2 + 12 * be * B0 * D1**2 + 12 * be * B1 * D1**2
    )
    P5 = (
        -6 * v * D1 + 6 * al * B0 * D1 + 6 * be * B0**2 * D1 + 6 * al * B1 * D1
        + 12 * be * B0 * B1 * D1 + 6 * be * B1**2 * D1 - 6 * mu * C1 * D1 + 6 * s * C1**2 * D1
    )
    P6 = (
        -3 * v * B0 + 3 * al * B0**2 / 2 + be * B0**3 - 3 * v * B1
        + 3 * al * B0 * B1 + 3 * be * B0**2 * B1 + 3 * al * B1**2 / 2
        + 3 * be * B0 * B1**2 + be * B1**3
    )
    return np.array([P0, P1, P2, P3, P4, P5, P6], dtype=complex)


def printed_scale(params: PhysicalParameters) -> float:
    """Factor relating the transcribed P_k to ours (3s)."""
    return 3.0 * params.s


@dataclass(frozen=True)
class ComparisonRow:
    k: int
    machine: complex
    printed: complex
    machine_rescaled: complex
    discrepancy: float

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "machine": {"re": self.machine.real, "im": self.machine.imag},
            "printed": {"re": self.printed.real, "im": self.printed.imag},
            "machine_rescaled": {"re": self.machine_rescaled.real, "im": self.machine_rescaled.imag},
            "discrepancy": self.discrepancy,
        }


@dataclass(frozen=True)
class ComparisonReport:
    rows: list[ComparisonRow]
    scale_factor: float

    def as_dict(self) -> dict:
        return {"scale_factor": self.scale_factor, "rows": [r.as_dict() for r in self.rows]}


def compare_with_printed_system(
    candidate: CandidateVector, params: PhysicalParameters
) -> ComparisonReport:
    """Side-by-side machine-generated and transcribed P_k.

    The discrepancy is |printed - 3s * machine|. No verdict is drawn here;
    the direct ODE residual is the authority.
    """
    machine = extract_system(candidate, params).p
    printed = printed_system(candidate, params)
    factor = printed_scale(params)
    rows = [
        ComparisonRow(
            k=k,
            machine=complex(machine[k]),
            printed=complex(printed[k]),
            machine_rescaled=complex(factor * machine[k]),
            discrepancy=float(abs(printed[k] - factor * machine[k])),
        )
        for k in range(NUM_EQUATIONS)
    ]
    return ComparisonReport(rows=rows, scale_factor=factor)
