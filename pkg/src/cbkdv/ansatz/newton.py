"""Damped Gauss-Newton rediscovery of the ansatz coefficients.

This is an independent route to the closed form: it only sees the
machine-generated P_k system, never the coefficient formulas.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..core_model import PhysicalParameters, SignTriple, solve_coefficients, valid_sign_triples
from ..errors import (
    ConvergedToDegenerate,
    DegenerateWidth,
    InvalidParameters,
    NoConvergence,
)
from .system import CandidateVector, extract_system

log = logging.getLogger(__name__)

MAX_HALVINGS = 30
MATCH_TOL = 1e-8


def system_residual(x: np.ndarray, params: PhysicalParameters) -> np.ndarray:
    """Real and imaginary parts of P_0..P_6 stacked into 14 reals."""
    return _evaluate(x, params)[0]


def _evaluate(x, params):
    sv = extract_system(CandidateVector.from_array(x), params, check_width=False)
    return np.concatenate([sv.p.real, sv.p.imag]), sv.scale


def _jacobian(x, r0, params):
    J = np.empty((r0.size, x.size))
    for j in range(x.size):
        h = 1e-7 * max(1.0, abs(x[j]))
        xp = x.copy()
        xp[j] += h
        J[:, j] = (system_residual(xp, params) - r0) / h
    return J


def newton_solve(
    params: PhysicalParameters,
    initial: CandidateVector,
    max_iter: int = 100,
    tol: float = 1e-12,
    *,
    complex_d1: bool = False,
    degenerate_tol: float = 1e-6,
) -> CandidateVector:
    """Gauss-Newton on the 14 real equations, halving steps until the
    residual norm drops.

    Convergence means ||P|| <= tol * (largest single-term coefficient), so
    that shrinking every unknown toward zero cannot fake a root.
    Raises NoConvergence when that is not reached within
    ``max_iter`` iterations (or no halving reduces it), and
    ConvergedToDegenerate when the limit is a constant profile
    (|B1| + |D1| or |C1| below ``degenerate_tol``).
    """
    if not tol > 0:
        raise InvalidParameters(f"tol must be positive, got {tol}")
    x = initial.to_array(complex_d1)
    r, scale = _evaluate(x, params)
    norm = np.linalg.norm(r)
    for it in range(max_iter + 1):
        if norm <= tol * scale:
            break
        if it == max_iter:
            raise NoConvergence(f"residual {norm:.3e} after {max_iter} iterations")
        J = _jacobian(x, r, params)
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        lam = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial = x + lam * step
            r_trial, s_trial = _evaluate(trial, params)
            n_trial = np.linalg.norm(r_trial)
            if np.isfinite(n_trial) and n_trial < norm:
                break
            lam *= 0.5
        else:
            raise NoConvergence(f"line search stalled at residual {norm:.3e} (iteration {it})")
        x, r, norm, scale = trial, r_trial, n_trial, s_trial
    cand = CandidateVector.from_array(x)
    if abs(cand.B1) + abs(cand.D1) < degenerate_tol or abs(cand.C1) < degenerate_tol:
        raise ConvergedToDegenerate("solver converged to a constant profile", candidate=cand)
    return cand


def closed_form_candidates(params: PhysicalParameters) -> list[tuple[SignTriple, CandidateVector]]:
    """Canonicalized closed-form candidates for every admissible sign choice."""
    out = []
    for signs in valid_sign_triples():
        try:
            coeffs = solve_coefficients(params, signs)
        except DegenerateWidth:
            continue
        out.append((signs, CandidateVector.from_coefficients(coeffs).canonical()))
    return out


def real_kink_candidates(params: PhysicalParameters) -> list[tuple[SignTriple, CandidateVector]]:
    """The real kinks B0 + B1*tanh(kappa*xi) paired with each closed form.

    tanh(2z) + i*sigma*sech(2z) = tanh(z + i*sigma*pi/4), so every complex
    closed-form wave is a complex translate of this real profile, which
    therefore solves the same system with C1 = kappa and D1 = 0.
    """
    out = []
    for signs, ref in closed_form_candidates(params):
        if signs.eps != 1:
            continue
        kink = CandidateVector(ref.B0, ref.B1, ref.C1 / 2, 0.0, ref.v)
        out.append((signs, kink))
    return out


def _close(x: CandidateVector, ref: CandidateVector, tol: float) -> bool:
    a = x.canonical().to_array(complex_d1=True)
    b = ref.to_array(complex_d1=True)
    return bool(np.max(np.abs(a - b)) <= tol * max(1.0, np.max(np.abs(b))))


def match_branch(
    candidate: CandidateVector, params: PhysicalParameters, tol: float = MATCH_TOL
) -> SignTriple | None:
    """First admissible sign choice whose closed form equals ``candidate``
    after (C1, B1) -> (-C1, -B1) canonicalization."""
    for signs, ref in closed_form_candidates(params):
        if _close(candidate, ref, tol):
            return signs
    return None


def classify_root(
    candidate: CandidateVector, params: PhysicalParameters, tol: float = MATCH_TOL
) -> tuple[str, SignTriple | None]:
    """("branch", signs), ("real_kink", signs) or ("unmatched", None)."""
    signs = match_branch(candidate, params, tol)
    if signs is not None:
        return "branch", signs
    for signs, ref in real_kink_candidates(params):
        if _close(candidate, ref, tol):
            return "real_kink", signs
    return "unmatched", None


@dataclass
class StartOutcome:
    initial: CandidateVector
    status: str  # "branch", "real_kink", "degenerate", "no_convergence", "unmatched"
    candidate: CandidateVector | None = None
    signs: SignTriple | None = None


@dataclass
class MultiStartReport:
    outcomes: list[StartOutcome] = field(default_factory=list)

    def count(self, status: str) -> int:
        return sum(o.status == status for o in self.outcomes)

    @property
    def branches_found(self) -> set[tuple[int, int, int, int]]:
        return {
            (o.signs.eps1, o.signs.eps2, o.signs.eps3, o.signs.eps)
            for o in self.outcomes
            if o.status == "branch"
        }

    @property
    def only_closed_form_or_degenerate(self) -> bool:
        """No converged non-degenerate root outside the closed-form family."""
        return self.count("unmatched") == 0 and self.count("real_kink") == 0

    def summary(self) -> dict:
        return {
            "starts": len(self.outcomes),
            "branch": self.count("branch"),
            "real_kink": self.count("real_kink"),
            "degenerate": self.count("degenerate"),
            "no_convergence": self.count("no_convergence"),
            "unmatched": self.count("unmatched"),
            "branches_found": sorted(self.branches_found),
        }


def multistart(
    params: PhysicalParameters,
    center: CandidateVector,
    n_starts: int = 200,
    spread: float = 0.5,
    seed: int = 0,
    max_iter: int = 60,
    tol: float = 1e-12,
    complex_d1: bool = False,
) -> MultiStartReport:
    """Run the solver from uniform random starts in a box around ``center``.

    The box half-width on each coordinate is ``spread * (|center_i| + m)``
    with m the largest |center_j|.
    """
    rng = np.random.default_rng(seed)
    c = center.to_array(complex_d1)
    half = spread * (np.abs(c) + np.abs(c).max())
    report = MultiStartReport()
    for _ in range(n_starts):
        init = CandidateVector.from_array(c + rng.uniform(-half, half))
        try:
            cand = newton_solve(params, init, max_iter, tol, complex_d1=complex_d1)
        except ConvergedToDegenerate as exc:
            report.outcomes.append(StartOutcome(init, "degenerate", exc.candidate))
            continue
        except NoConvergence:
            report.outcomes.append(StartOutcome(init, "no_convergence"))
            continue
        status, signs = classify_root(cand, params)
        if status == "unmatched":
            log.warning("unmatched root %s", cand)
        report.outcomes.append(StartOutcome(init, status, cand, signs))
    return report
