"""Wave speed as a function of (alpha, beta, mu, s) and its monotonicity.

Only the eps3 = -1 branch has interior stationary points; eps3 = +1 is
monotone in alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core_model import PhysicalParameters, velocity_formula
from .errors import InvalidParameters, SweepOutsideValidity

BISECT_VTOL = 1e-12
MAX_DOUBLINGS = 60
PARAM_NAMES = ("alpha", "beta", "mu", "s")


@dataclass(frozen=True)
class VelocityQuery:
    params: PhysicalParameters
    eps3: int

    def __post_init__(self):
        if self.eps3 not in (-1, 1):
            raise InvalidParameters(f"eps3 must be +1 or -1, got {self.eps3!r}")


def velocity(q: VelocityQuery) -> float:
    p = q.params
    return velocity_formula(p.alpha, p.beta, p.mu, p.s, q.eps3)


def velocity_limit(alpha: float, beta: float, mu: float, s: float, eps3: int) -> float:
    """Velocity at boundary points (alpha = 0 or mu = 0), where the formula is
    continuous and is evaluated as a limit."""
    if alpha < 0 or mu < 0 or not beta < 0 or not s > 0:
        raise InvalidParameters("boundary evaluation needs alpha >= 0, mu >= 0, beta < 0, s > 0")
    return velocity_formula(alpha, beta, mu, s, eps3)


@dataclass(frozen=True)
class VelocityGradient:
    dv_dalpha: float
    dv_dmu: float
    dv_dabsbeta: float
    dv_ds: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.dv_dalpha, self.dv_dmu, self.dv_dabsbeta, self.dv_ds)


def velocity_gradient(q: VelocityQuery) -> VelocityGradient:
    """Closed-form partials; |beta| is used under every square root."""
    p, e3 = q.params, q.eps3
    al, ab, mu, s = p.alpha, p.abs_beta, p.mu, p.s
    root = math.sqrt(6 * ab / s)
    dv_dalpha = (root * e3 * mu + 6 * al) / (18 * ab)
    dv_dmu = (s * al * root * e3 - 8 * ab * mu) / (18 * s * ab)
    dv_dabsbeta = -al * (6 * al + root * e3 * mu) / (36 * ab**2)
    ratio = math.sqrt(ab / s)
    dv_ds = mu * (-math.sqrt(6) * al * e3 + 8 * mu * ratio) / (36 * s**2 * ratio)
    return VelocityGradient(dv_dalpha, dv_dmu, dv_dabsbeta, dv_ds)


@dataclass(frozen=True)
class CriticalPoints:
    """Stationary points and zero crossings of the speed.

    ``beta_v`` is the reference value -alpha^2 s / (6 mu^2).
    ``beta_stationary`` is the actual zero of dv/d|beta| for eps3 = -1,
    -6 alpha^2 s / mu^2; the two differ by a factor of 36.
    """

    alpha_v: float | None
    beta_v: float | None
    beta_stationary: float | None
    alpha_c: float | None
    mu_c: float | None

    def as_dict(self) -> dict:
        return {
            "alpha_v": self.alpha_v,
            "beta_v": self.beta_v,
            "beta_stationary": self.beta_stationary,
            "alpha_c": self.alpha_c,
            "mu_c": self.mu_c,
        }


def _bisect(f, lo: float, hi: float) -> float:
    flo = f(lo)
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm) < BISECT_VTOL or hi - lo <= 4 * math.ulp(mid):
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _root_by_doubling(f, lo: float, start: float, cap: float) -> float | None:
    """Bisect f on [lo, hi], doubling hi from ``start`` until f changes sign."""
    f_lo = f(lo)
    if f_lo == 0:
        return lo
    hi = start
    while hi <= cap:
        if (f(hi) > 0) != (f_lo > 0):
            return _bisect(f, lo, hi)
        hi *= 2
    return None


def critical_points(params: PhysicalParameters, eps3: int = -1) -> CriticalPoints:
    al, be, mu, s = params.alpha, params.beta, params.mu, params.s
    ab = params.abs_beta
    alpha_v = mu * math.sqrt(ab / (6 * s)) if eps3 == -1 else None
    beta_v = -(al**2) * s / (6 * mu**2) if mu > 0 else None
    beta_stat = -6 * al**2 * s / mu**2 if (mu > 0 and eps3 == -1) else None

    def v_alpha(a):
        return velocity_formula(a, be, mu, s, eps3)

    # v -> +inf as alpha grows, so a sign change exists whenever v(lo) < 0
    lo = alpha_v if alpha_v is not None and alpha_v > 0 else 0.0
    start = max(lo, al, 1e-300) * 2
    alpha_c = None
    if v_alpha(lo) < 0:
        alpha_c = _root_by_doubling(v_alpha, lo, start, (2.0**60) * max(alpha_v or 0.0, al))

    def v_mu(m):
        return velocity_formula(al, be, m, s, eps3)

    mu_c = None
    if v_mu(0.0) > 0:
        mu_c = _root_by_doubling(v_mu, 0.0, max(mu, 1e-12), (2.0**60) * max(mu, 1e-12))
    return CriticalPoints(alpha_v, beta_v, beta_stat, alpha_c, mu_c)


@dataclass(frozen=True)
class SweepSpec:
    varying: str
    lo: float
    hi: float
    count: int
    fixed: PhysicalParameters
    eps3: int = -1

    def __post_init__(self):
        if self.varying not in PARAM_NAMES:
            raise SweepOutsideValidity(f"varying must be one of {PARAM_NAMES}")
        if int(self.count) != self.count or self.count < 2:
            raise SweepOutsideValidity("count must be an integer >= 2")
        if not self.lo < self.hi:
            raise SweepOutsideValidity("range must satisfy lo < hi")
        if self.varying == "beta":
            ok = self.hi < 0
        elif self.varying == "mu":
            ok = self.lo >= 0
        else:
            ok = self.lo > 0
        if not ok:
            raise SweepOutsideValidity(
                f"range [{self.lo}, {self.hi}] leaves the validity region of {self.varying}"
            )
        if self.eps3 not in (-1, 1):
            raise SweepOutsideValidity("eps3 must be +1 or -1")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, int(self.count))

    def params_at(self, value: float) -> PhysicalParameters:
        return replace(self.fixed, **{self.varying: float(value)})


@dataclass(frozen=True)
class SweepRow:
    varying_param: str
    value: float
    v: float
    gradient: VelocityGradient


def sweep(spec: SweepSpec) -> list[SweepRow]:
    rows = []
    for value in spec.values():
        q = VelocityQuery(spec.params_at(value), spec.eps3)
        rows.append(SweepRow(spec.varying, float(value), velocity(q), velocity_gradient(q)))
    return rows


@dataclass(frozen=True)
class SegmentCheck:
    label: str
    expected: str  # "decreasing" | "increasing"
    lo: float
    hi: float
    passed: bool

    def as_dict(self) -> dict:
        return {"label": self.label, "expected": self.expected, "lo": self.lo, "hi": self.hi,
                "passed": self.passed}


@dataclass(frozen=True)
class MonotonicityReport:
    varying: str
    eps3: int
    segments: list[SegmentCheck]
    turning_point: float | None
    observed_ends: tuple[float, float]
    limits: dict
    boundary_evaluations: list[str]

    @property
    def passed(self) -> bool:
        return all(seg.passed for seg in self.segments)

    def as_dict(self) -> dict:
        return {
            "varying": self.varying,
            "eps3": self.eps3,
            "passed": self.passed,
            "turning_point": self.turning_point,
            "observed_ends": list(self.observed_ends),
            "limits": self.limits,
            "boundary_evaluations": self.boundary_evaluations,
            "segments": [s.as_dict() for s in self.segments],
        }


def _monotone(vals: np.ndarray, direction: str) -> bool:
    d = np.diff(vals)
    tol = 1e-13 * max(1.0, float(np.abs(vals).max()))
    return bool(np.all(d < tol)) if direction == "decreasing" else bool(np.all(d > -tol))


def monotonicity_report(spec: SweepSpec) -> MonotonicityReport:
    """Sample v over the sweep and check the predicted arrow pattern.

    eps3 = -1: alpha and |beta| fall then rise (turning at alpha_v and at
    the stationary |beta|), mu is decreasing, s is increasing. For eps3 = +1
    only alpha is predicted (increasing); other parameters get their
    observed pattern reported without a prediction.
    """
    xs = spec.values()
    vs = np.array([velocity(VelocityQuery(spec.params_at(x), spec.eps3)) for x in xs])
    f = spec.fixed
    al, ab, mu, s = f.alpha, f.abs_beta, f.mu, f.s
    turning = None
    boundary = []
    limits: dict = {}
    pattern: list[tuple[str, str, float, float]] = []
    lo, hi = spec.lo, spec.hi

    if spec.varying == "alpha":
        limits["alpha->0"] = velocity_limit(0.0, f.beta, mu, s, spec.eps3)
        boundary.append("alpha=0")
        if spec.eps3 == -1:
            turning = mu * math.sqrt(ab / (6 * s))
            limits["at_alpha_v"] = velocity_formula(turning, f.beta, mu, s, -1)
        else:
            pattern.append(("alpha", "increasing", lo, hi))
    elif spec.varying == "mu":
        limits["mu->0"] = velocity_limit(al, f.beta, 0.0, s, spec.eps3)
        boundary.append("mu=0")
        if spec.eps3 == -1:
            pattern.append(("mu", "decreasing", lo, hi))
    elif spec.varying == "beta":
        # work in |beta|: ascending |beta| is descending beta
        xs, vs = -xs[::-1], vs[::-1]
        lo, hi = xs[0], xs[-1]
        limits["|beta|->inf"] = -2 * mu**2 / (9 * s)
        if spec.eps3 == -1 and mu > 0:
            turning = 6 * al**2 * s / mu**2
            limits["at_|beta|_stationary"] = velocity_formula(al, -turning, mu, s, -1)
    elif spec.varying == "s":
        limits["s->inf"] = al**2 / (4 * ab)
        if spec.eps3 == -1:
            pattern.append(("s", "increasing", lo, hi))

    if turning is not None:
        name = "alpha" if spec.varying == "alpha" else "|beta|"
        if lo < turning:
            pattern.append((f"{name} < turning", "decreasing", lo, min(turning, hi)))
        if hi > turning:
            pattern.append((f"{name} > turning", "increasing", max(turning, lo), hi))

    segments = []
    for label, direction, a, b in pattern:
        mask = (xs >= a) & (xs <= b)
        seg = vs[mask]
        passed = len(seg) < 2 or _monotone(seg, direction)
        segments.append(SegmentCheck(label, direction, float(a), float(b), passed))
    return MonotonicityReport(
        varying=spec.varying,
        eps3=spec.eps3,
        segments=segments,
        turning_point=turning,
        observed_ends=(float(vs[0]), float(vs[-1])),
        limits=limits,
        boundary_evaluations=boundary,
    )
