import numpy as np
import pytest

from cbkdv.core_model import evaluate
from cbkdv.errors import BlowUp, DomainTooNarrow, InvalidParameters
from cbkdv.wave_dynamics import (
    FieldState,
    GridSpec,
    TimeSpec,
    error_metrics,
    rhs,
    simulate,
    spatial_derivatives,
    stable_dt,
    step_rk4,
)

GRID = GridSpec.from_spacing(-40.0, 40.0, 0.2)


def test_grid_construction():
    g = GridSpec.from_spacing(-60, 60, 0.1)
    assert g.num_points == 1201
    assert g.dx == pytest.approx(0.1)
    left, right = g.ghost_x()
    assert np.allclose(left, [-60.2, -60.1]) and np.allclose(right, [60.1, 60.2])
    with pytest.raises(InvalidParameters):
        GridSpec(0, 1, 8)
    with pytest.raises(InvalidParameters):
        GridSpec(1, 0, 32)


def test_stencils_on_polynomials():
    dx = 0.1
    x = np.arange(-2, 3) * dx + 0.3
    # padded array of five points; derivatives at the centre
    for f, d1, d2, d3 in [
        (lambda x: x**3, lambda x: 3 * x**2, lambda x: 6 * x, lambda x: 6 + 0 * x),
        (lambda x: x**2, lambda x: 2 * x, lambda x: 2 + 0 * x, lambda x: 0 * x),
    ]:
        ux, uxx, uxxx = spatial_derivatives(f(x), dx)
        # central differences are exact up to cubics for u_x (error dx^2 u'''/6)
        assert ux[0] == pytest.approx(d1(0.3) + (dx**2 * d3(0.3)) / 6, abs=1e-10)
        assert uxx[0] == pytest.approx(d2(0.3), abs=1e-9)
        assert uxxx[0] == pytest.approx(d3(0.3), abs=1e-7)


def test_rhs_second_order(ref_solution):
    sol = ref_solution
    errs = []
    for dx in (0.4, 0.2, 0.1):
        g = GridSpec.from_spacing(-20, 20, dx)
        u = evaluate(sol, g.x, 0.0)
        # exact u_t = -v * u_x for a travelling wave
        h = 1e-6
        ut = (evaluate(sol, g.x, h) - evaluate(sol, g.x, -h)) / (2 * h)
        errs.append(np.max(np.abs(rhs(FieldState(0.0, u), sol.params, g, sol) - ut)))
    assert errs[0] / errs[1] == pytest.approx(4, rel=0.1)
    assert errs[1] / errs[2] == pytest.approx(4, rel=0.1)


def test_constant_and_zero_states_are_stationary(ref_params, ref_solution):
    g = GRID
    zero = ref_solution.with_coeffs(B0=0.0, B1=0.0, D1=0j)
    assert np.all(rhs(FieldState(0.0, np.zeros(g.num_points, complex)), ref_params, g, zero) == 0)
    const = ref_solution.with_coeffs(B0=1.7, B1=0.0, D1=0j)
    out = rhs(FieldState(0.0, np.full(g.num_points, 1.7 + 0j)), ref_params, g, const)
    assert np.max(np.abs(out)) < 1e-12


def test_rhs_rejects_wrong_shape_and_nan(ref_params, ref_solution):
    with pytest.raises(InvalidParameters):
        rhs(FieldState(0.0, np.zeros(5, complex)), ref_params, GRID, ref_solution)
    bad = np.zeros(GRID.num_points, complex)
    bad[10] = np.nan
    with pytest.raises(BlowUp):
        rhs(FieldState(0.0, bad), ref_params, GRID, ref_solution)


def test_zero_dt_and_single_step(ref_params, ref_solution):
    u0 = evaluate(ref_solution, GRID.x, 0.0)
    s0 = FieldState(0.0, u0)
    assert step_rk4(s0, 0.0, ref_params, GRID, ref_solution) is s0
    dt = stable_dt(GRID, ref_params, float(np.abs(u0).max()))
    s1 = step_rk4(s0, -dt, ref_params, GRID, ref_solution)
    assert s1.t == -dt
    assert error_metrics(s1, ref_solution, GRID).l_inf < 1e-4


def test_t_end_zero(ref_solution):
    run = simulate(ref_solution, GRID, TimeSpec(0.0))
    assert run.steps == 0 and len(run.records) == 1
    assert run.final[1].l_inf < 1e-15


def test_time_spec_guards(ref_params, ref_solution):
    u_scale = 1.0
    limit = stable_dt(GRID, ref_params, u_scale)
    dt, steps = TimeSpec(1.0).resolve(GRID, ref_params, u_scale)
    assert dt <= limit and dt * steps == pytest.approx(1.0)
    with pytest.raises(InvalidParameters):
        TimeSpec(1.0, dt=2 * limit).resolve(GRID, ref_params, u_scale)
    with pytest.raises(InvalidParameters):
        TimeSpec(1.0, dt=limit * 0.7).resolve(GRID, ref_params, u_scale)
    with pytest.raises(InvalidParameters):
        TimeSpec(-1.0)


def test_domain_too_narrow(ref_solution):
    with pytest.raises(DomainTooNarrow):
        simulate(ref_solution, GridSpec.from_spacing(-10, 10, 0.2), TimeSpec(0.1))


def test_forward_integration_blows_up(ref_solution):
    # anti-diffusion (mu > 0) amplifies round-off at the grid scale
    with pytest.raises(BlowUp) as info:
        simulate(ref_solution, GridSpec.from_spacing(-40, 40, 0.1), TimeSpec(2.0))
    assert 0 < info.value.t < 2.0


def _reverse_error(sol, dx, t_end=0.5):
    run = simulate(sol, GridSpec.from_spacing(-40, 40, dx), TimeSpec(t_end), reverse=True)
    return run.final[1].l_inf


def test_reverse_accuracy_and_order(ref_solution):
    e1 = _reverse_error(ref_solution, 0.2)
    e2 = _reverse_error(ref_solution, 0.1)
    assert e2 < 1e-4
    assert np.log2(e1 / e2) >= 1.8


def test_records_and_translation(ref_solution):
    sol = ref_solution.with_coeffs(x0=3.0)
    run = simulate(sol, GRID, TimeSpec(0.2), record_every=10, reverse=True)
    ts = [s.t for s, _ in run.records]
    assert ts[0] == 0.0 and ts[-1] == -0.2
    assert all(a > b for a, b in zip(ts, ts[1:]))
    assert run.final[1].l_inf < 1e-3


def test_perturbed_reverse_run_stays_bounded(ref_solution, rng):
    u0 = evaluate(ref_solution, GRID.x, 0.0)
    noise = 1e-3 * rng.standard_normal(u0.size)
    run = simulate(ref_solution, GRID, TimeSpec(0.3), reverse=True, initial=u0 + noise)
    # backward in time the mu term damps, so the perturbation does not grow
    assert run.final[1].l_inf <= run.records[0][1].l_inf * 1.5


def test_negative_record_every(ref_solution):
    with pytest.raises(InvalidParameters):
        simulate(ref_solution, GRID, TimeSpec(0.1), record_every=-1)
