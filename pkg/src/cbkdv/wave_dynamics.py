"""Method-of-lines integration of the complex compound Burgers-KdV equation.

Space: second-order central differences on a uniform grid, two ghost points
per side filled from an analytic traveling wave at the current stage time.
Time: classical RK4.

With the sign convention u_t + ... + mu*u_xx + s*u_xxx = 0 the mu term is
anti-diffusive for mu > 0, so forward integration amplifies grid-scale
noise at rate ~4*mu/dx**2. Integrating backward in time (``reverse=True``)
is the well-posed direction for mu > 0; both directions test the same
equation against the same exact solution.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .core_model import PhysicalParameters, TravelingWaveSolution, evaluate
from .errors import BlowUp, DomainTooNarrow, InvalidParameters

log = logging.getLogger(__name__)

GHOSTS = 2
KINK_CONTAINMENT = 1e-6


@dataclass(frozen=True)
class GridSpec:
    x_left: float
    x_right: float
    num_points: int

    def __post_init__(self):
        if not self.x_left < self.x_right:
            raise InvalidParameters("x_left must be < x_right")
        if int(self.num_points) != self.num_points or self.num_points < 16:
            raise InvalidParameters(f"num_points must be an integer >= 16, got {self.num_points}")
        object.__setattr__(self, "num_points", int(self.num_points))

    @classmethod
    def from_spacing(cls, x_left: float, x_right: float, dx: float) -> "GridSpec":
        if not dx > 0:
            raise InvalidParameters(f"dx must be positive, got {dx}")
        n = round((x_right - x_left) / dx) + 1
        return cls(x_left, x_right, n)

    @property
    def dx(self) -> float:
        return (self.x_right - self.x_left) / (self.num_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_left, self.x_right, self.num_points)

    def ghost_x(self) -> tuple[np.ndarray, np.ndarray]:
        dx = self.dx
        left = self.x_left - dx * np.arange(GHOSTS, 0, -1)
        right = self.x_right + dx * np.arange(1, GHOSTS + 1)
        return left, right


def stable_dt(grid: GridSpec, params: PhysicalParameters, u_scale: float) -> float:
    """dx^3 / (4s + dx*mu + dx^2*u_scale*(alpha + |beta|*u_scale))."""
    dx = grid.dx
    denom = (
        4 * params.s
        + dx * params.mu
        + dx**2 * u_scale * (params.alpha + params.abs_beta * u_scale)
    )
    return dx**3 / denom


@dataclass(frozen=True)
class TimeSpec:
    """``dt=None`` picks the largest step allowed by the guard that divides
    ``t_end`` evenly."""

    t_end: float
    dt: float | None = None
    safety_factor: float = 1.0

    def __post_init__(self):
        if not self.t_end >= 0:
            raise InvalidParameters(f"t_end must be >= 0, got {self.t_end}")
        if not 0 < self.safety_factor <= 1:
            raise InvalidParameters("safety_factor must lie in (0, 1]")
        if self.dt is not None and not self.dt > 0:
            raise InvalidParameters(f"dt must be positive, got {self.dt}")

    def resolve(self, grid: GridSpec, params: PhysicalParameters, u_scale: float) -> tuple[float, int]:
        """(dt, number of steps)."""
        limit = self.safety_factor * stable_dt(grid, params, u_scale)
        if self.t_end == 0:
            return 0.0, 0
        if self.dt is None:
            steps = math.ceil(self.t_end / limit * (1 - 1e-12))
            return self.t_end / steps, steps
        if self.dt > limit * (1 + 1e-12):
            raise InvalidParameters(f"dt={self.dt:.3e} exceeds the stability guard {limit:.3e}")
        steps = max(1, round(self.t_end / self.dt))
        if abs(steps * self.dt - self.t_end) > 1e-9 * max(1.0, self.t_end):
            raise InvalidParameters("t_end must be an integer multiple of dt")
        return self.dt, steps


@dataclass(frozen=True)
class FieldState:
    t: float
    values: np.ndarray


@dataclass(frozen=True)
class ErrorMetrics:
    l_inf: float
    l2: float
    t: float


@dataclass
class SimulationRun:
    solution: TravelingWaveSolution
    grid: GridSpec
    dt: float
    steps: int
    reverse: bool
    records: list[tuple[FieldState, ErrorMetrics]] = field(default_factory=list)

    @property
    def final(self) -> tuple[FieldState, ErrorMetrics]:
        return self.records[-1]


def _padded(values, t, grid, boundary):
    left, right = grid.ghost_x()
    return np.concatenate(
        [evaluate(boundary, left, t), values, evaluate(boundary, right, t)]
    )


def spatial_derivatives(up: np.ndarray, dx: float):
    """u_x, u_xx, u_xxx at the centre points of an array padded by two on
    each side."""
    ux = (up[3:-1] - up[1:-3]) / (2 * dx)
    uxx = (up[3:-1] - 2 * up[2:-2] + up[1:-3]) / dx**2
    uxxx = (up[4:] - 2 * up[3:-1] + 2 * up[1:-3] - up[:-4]) / (2 * dx**3)
    return ux, uxx, uxxx


def rhs(
    state: FieldState,
    params: PhysicalParameters,
    grid: GridSpec,
    boundary: TravelingWaveSolution,
) -> np.ndarray:
    """u_t = -alpha*u*u_x - beta*u^2*u_x - mu*u_xx - s*u_xxx at every grid point."""
    u = np.asarray(state.values, dtype=complex)
    if u.shape != (grid.num_points,):
        raise InvalidParameters(f"state has {u.shape} values, grid has {grid.num_points}")
    ux, uxx, uxxx = spatial_derivatives(_padded(u, state.t, grid, boundary), grid.dx)
    with np.errstate(over="ignore", invalid="ignore"):
        out = -(params.alpha * u + params.beta * u * u) * ux - params.mu * uxx - params.s * uxxx
    if not np.all(np.isfinite(out)):
        raise BlowUp(f"non-finite tendency at t={state.t:.6g}", t=state.t)
    return out


def step_rk4(
    state: FieldState,
    dt: float,
    params: PhysicalParameters,
    grid: GridSpec,
    boundary: TravelingWaveSolution,
) -> FieldState:
    """One classical RK4 step; negative ``dt`` steps backward in time."""
    if dt == 0:
        return state
    t, u = state.t, state.values
    k1 = rhs(state, params, grid, boundary)
    k2 = rhs(FieldState(t + dt / 2, u + dt / 2 * k1), params, grid, boundary)
    k3 = rhs(FieldState(t + dt / 2, u + dt / 2 * k2), params, grid, boundary)
    k4 = rhs(FieldState(t + dt, u + dt * k3), params, grid, boundary)
    new = u + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    if not np.all(np.isfinite(new)):
        raise BlowUp(f"non-finite state at t={t + dt:.6g}", t=t + dt)
    return FieldState(t + dt, new)


def error_metrics(state: FieldState, sol: TravelingWaveSolution, grid: GridSpec) -> ErrorMetrics:
    """Errors against the exact wave on interior points (two per edge dropped)."""
    exact = evaluate(sol, grid.x, state.t)
    err = np.abs(state.values - exact)[GHOSTS:-GHOSTS]
    return ErrorMetrics(
        l_inf=float(err.max()), l2=float(math.sqrt(grid.dx * np.sum(err**2))), t=state.t
    )


def check_containment(sol: TravelingWaveSolution, grid: GridSpec, t_values) -> None:
    c = sol.coeffs
    for t in t_values:
        for edge in (grid.x_left, grid.x_right):
            if abs(math.tanh(c.C1 * (edge - c.v * t + c.x0))) <= 1 - KINK_CONTAINMENT:
                raise DomainTooNarrow(
                    f"kink reaches the edge x={edge:g} at t={t:g}; widen the grid"
                )


def simulate(
    sol: TravelingWaveSolution,
    grid: GridSpec,
    time: TimeSpec,
    record_every: int = 0,
    *,
    reverse: bool = False,
    u_scale: float | None = None,
    initial: np.ndarray | None = None,
) -> SimulationRun:
    """Integrate from the exact profile at t=0 to t_end (or -t_end when
    ``reverse``), recording every ``record_every`` steps and at the end.

    ``initial`` replaces the starting field (perturbation studies); ghost
    values still come from ``sol``.
    """
    if record_every < 0:
        raise InvalidParameters("record_every must be >= 0")
    sign = -1.0 if reverse else 1.0
    check_containment(sol, grid, (0.0, sign * time.t_end))
    u0 = evaluate(sol, grid.x, 0.0) if initial is None else np.asarray(initial, dtype=complex)
    if u_scale is None:
        u_scale = float(np.abs(u0).max())
    dt, steps = time.resolve(grid, sol.params, u_scale)
    run = SimulationRun(sol, grid, dt, steps, reverse)
    state = FieldState(0.0, u0)
    run.records.append((state, error_metrics(state, sol, grid)))
    signed_dt = sign * dt
    for n in range(1, steps + 1):
        state = step_rk4(state, signed_dt, sol.params, grid, sol)
        # snap to the exact final time to keep records comparable
        if n == steps:
            state = FieldState(sign * time.t_end, state.values)
        if n == steps or (record_every and n % record_every == 0):
            run.records.append((state, error_metrics(state, sol, grid)))
    log.debug("simulated %d steps of dt=%g on %d points", steps, dt, grid.num_points)
    return run
