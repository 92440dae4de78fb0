"""Closed-form complex traveling waves of the compound Burgers-KdV equation.

The PDE is

    u_t + alpha*u*u_x + beta*u**2*u_x + mu*u_xx + s*u_xxx = 0

and with xi = x - v*t it reduces (integration constant zero) to

    u'' + r*u' + a*u**3 + b*u**2 + c*u = 0,
    r = mu/s, a = beta/(3s), b = alpha/(2s), c = -v/s.

The wave family is u = B0 + B1*tanh(C1*(xi + x0)) + D1*sech(C1*(xi + x0)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    ConstraintViolation,
    DegenerateAmplitudes,
    DegenerateWidth,
    InvalidParameters,
)

BALANCE_TOL = 1e-12


@dataclass(frozen=True)
class PhysicalParameters:
    """Coefficients of the PDE.

    ``alpha > 0``, ``beta < 0``, ``s > 0`` and ``mu >= 0`` are enforced on
    construction.
    """

    alpha: float
    beta: float
    mu: float
    s: float

    def __post_init__(self):
        for name in ("alpha", "beta", "mu", "s"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise InvalidParameters(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise InvalidParameters(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if not self.alpha > 0:
            raise InvalidParameters(f"alpha must be > 0, got {self.alpha}")
        if not self.beta < 0:
            raise InvalidParameters(f"beta must be < 0 (beta<0 requirement), got {self.beta}")
        if not self.s > 0:
            raise InvalidParameters(f"s must be > 0, got {self.s}")
        if not self.mu >= 0:
            raise InvalidParameters(f"mu must be >= 0, got {self.mu}")

    @property
    def abs_beta(self) -> float:
        return -self.beta

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "mu": self.mu, "s": self.s}


@dataclass(frozen=True)
class ReducedODECoefficients:
    r: float
    a: float
    b: float
    c: float

    @classmethod
    def from_params(cls, params: PhysicalParameters, v: float) -> "ReducedODECoefficients":
        s = params.s
        return cls(r=params.mu / s, a=params.beta / (3 * s), b=params.alpha / (2 * s), c=-v / s)


def _check_sign(name, value):
    if value not in (-1, 1) or isinstance(value, bool):
        raise InvalidParameters(f"{name} must be +1 or -1, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class SignTriple:
    """Branch selector (eps1, eps2, eps3) plus the free sign eps of D1."""

    eps1: int
    eps2: int
    eps3: int
    eps: int = 1

    def __post_init__(self):
        for name in ("eps1", "eps2", "eps3", "eps"):
            object.__setattr__(self, name, _check_sign(name, getattr(self, name)))

    @property
    def satisfies_constraint(self) -> bool:
        return self.eps1 * self.eps2 * self.eps3 == 1

    def as_dict(self) -> dict:
        return {"eps1": self.eps1, "eps2": self.eps2, "eps3": self.eps3, "eps": self.eps}


def valid_sign_triples() -> list[SignTriple]:
    """The 8 sign choices with eps1*eps2*eps3 = 1, in a fixed order."""
    out = []
    for e1 in (1, -1):
        for e2 in (1, -1):
            for e in (1, -1):
                out.append(SignTriple(e1, e2, e1 * e2, e))
    return out


@dataclass(frozen=True)
class WaveCoefficients:
    kappa: float
    B0: float
    B1: float
    C1: float
    D1: complex
    v: float
    x0: float = 0.0

    def as_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "B0": self.B0,
            "B1": self.B1,
            "C1": self.C1,
            "D1": {"re": self.D1.real, "im": self.D1.imag},
            "v": self.v,
            "x0": self.x0,
        }


def _amplitude_scale(params: PhysicalParameters) -> float:
    # (alpha / 2|beta|) * sqrt(|beta| / 6s)
    return params.alpha / (2 * params.abs_beta) * math.sqrt(params.abs_beta / (6 * params.s))


def kappa(params: PhysicalParameters, eps1: int, eps2: int) -> float:
    eps1 = _check_sign("eps1", eps1)
    eps2 = _check_sign("eps2", eps2)
    return eps1 * _amplitude_scale(params) - eps2 * params.mu / (6 * params.s)


def velocity_formula(alpha: float, beta: float, mu: float, s: float, eps3: int) -> float:
    """Wave speed of the nontrivial branch; no domain checks.

    Kept unvalidated so that boundary values (alpha=0, mu=0) can be evaluated
    as limits.
    """
    ab = abs(beta)
    bracket = alpha / (2 * ab) * math.sqrt(ab / (6 * s)) - eps3 * mu / (6 * s)
    return -(mu**2) / (6 * s) - 2 * s * bracket**2 - alpha**2 / (4 * beta)


def solve_coefficients(
    params: PhysicalParameters, signs: SignTriple, x0: float = 0.0
) -> WaveCoefficients:
    if not signs.satisfies_constraint:
        raise ConstraintViolation(
            f"eps1*eps2*eps3 must equal 1, got {signs.eps1 * signs.eps2 * signs.eps3}"
        )
    if not math.isfinite(x0):
        raise InvalidParameters(f"x0 must be finite, got {x0!r}")
    k = kappa(params, signs.eps1, signs.eps2)
    if abs(k) < 1e-14 * _amplitude_scale(params) + 1e-30:
        raise DegenerateWidth(f"kappa = {k!r} collapses the profile to a constant")
    alpha, ab, mu, s = params.alpha, params.abs_beta, params.mu, params.s
    root = math.sqrt(6 * s / ab)
    e3 = signs.eps3
    B0 = -alpha / (2 * params.beta) - e3 * root * mu / (6 * s)
    B1 = e3 * root * k
    D1 = complex(0.0, signs.eps * (alpha / (2 * ab) - e3 * mu / (6 * s) * root))
    v = velocity_formula(alpha, params.beta, mu, s, e3)
    return WaveCoefficients(kappa=k, B0=B0, B1=B1, C1=2 * k, D1=D1, v=v, x0=float(x0))


@dataclass(frozen=True)
class TravelingWaveSolution:
    params: PhysicalParameters
    signs: SignTriple
    coeffs: WaveCoefficients = field(repr=False)

    @classmethod
    def build(
        cls, params: PhysicalParameters, signs: SignTriple, x0: float = 0.0
    ) -> "TravelingWaveSolution":
        return cls(params, signs, solve_coefficients(params, signs, x0))

    def with_coeffs(self, **changes) -> "TravelingWaveSolution":
        """Copy with some coefficients overridden (negative controls, constants)."""
        return replace(self, coeffs=replace(self.coeffs, **changes))

    @property
    def ode(self) -> ReducedODECoefficients:
        return ReducedODECoefficients.from_params(self.params, self.coeffs.v)


def trivial_solutions(params: PhysicalParameters, v: float) -> list[float]:
    """Real constant solutions, listed with multiplicity and sorted.

    These are the roots of a*u**3 + b*u**2 + c*u; zero is always present.
    """
    ode = ReducedODECoefficients.from_params(params, v)
    a, b, c = ode.a, ode.b, ode.c
    roots = [0.0]
    disc = b * b - 4 * a * c
    if disc >= 0:
        sq = math.sqrt(disc)
        # a < 0 always; stable form avoids cancellation
        q = -0.5 * (b + math.copysign(sq, b))
        r1 = q / a
        r2 = c / q if q != 0 else 0.0
        roots.extend([r1, r2])
    return sorted(roots)


def sech(z):
    z = np.abs(z)
    e = np.exp(-z)
    return 2 * e / (1 + e * e)


def evaluate(sol: TravelingWaveSolution, x, t):
    """u(x, t); accepts scalars or broadcastable arrays."""
    c = sol.coeffs
    z = c.C1 * (np.asarray(x, dtype=float) - c.v * np.asarray(t, dtype=float) + c.x0)
    out = c.B0 + c.B1 * np.tanh(z) + c.D1 * sech(z)
    return complex(out) if np.ndim(out) == 0 else out


def profile_derivatives(sol: TravelingWaveSolution, xi):
    """(u, u', u'') in the traveling coordinate, from exact tanh/sech calculus."""
    c = sol.coeffs
    z = c.C1 * (np.asarray(xi, dtype=float) + c.x0)
    th = np.tanh(z)
    sh = sech(z)
    u = c.B0 + c.B1 * th + c.D1 * sh
    du = c.B1 * c.C1 * sh**2 - c.D1 * c.C1 * sh * th
    d2u = -2 * c.B1 * c.C1**2 * sh**2 * th + c.D1 * c.C1**2 * (sh * th**2 - sh**3)
    return u, du, d2u


def ode_terms(sol: TravelingWaveSolution, xi):
    """The five additive terms u'', r*u', a*u^3, b*u^2, c*u stacked on axis 0."""
    ode = sol.ode
    u, du, d2u = profile_derivatives(sol, xi)
    u = np.asarray(u, dtype=complex)
    return np.stack(
        np.broadcast_arrays(d2u, ode.r * du, ode.a * u**3, ode.b * u**2, ode.c * u)
    ).astype(complex)


def residual_ode(sol: TravelingWaveSolution, xi):
    total = ode_terms(sol, xi).sum(axis=0)
    return complex(total) if np.ndim(total) == 0 else total


def relative_ode_residual(sol: TravelingWaveSolution, xi) -> float:
    """max |residual| over xi divided by the largest single-term magnitude."""
    terms = ode_terms(sol, np.atleast_1d(xi))
    scale = np.abs(terms).max()
    res = np.abs(terms.sum(axis=0)).max()
    if scale == 0:
        return 0.0
    return float(res / scale)


def amplitude_balance(coeffs: WaveCoefficients) -> tuple[float, bool]:
    """B1**2 / D1**2 and whether |B1| == |D1| to 1e-12 (relative)."""
    B1, D1 = coeffs.B1, complex(coeffs.D1)
    if B1 == 0 and D1 == 0:
        raise DegenerateAmplitudes("both B1 and D1 vanish")
    d2 = D1 * D1
    quotient = math.inf if d2 == 0 else (B1 * B1 / d2).real
    mag = max(abs(B1), abs(D1))
    balanced = abs(abs(B1) - abs(D1)) <= BALANCE_TOL * mag
    return quotient, balanced
