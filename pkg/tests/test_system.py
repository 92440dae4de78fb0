import numpy as np
import pytest
import sympy as sp

from cbkdv.ansatz.system import (
    CandidateVector,
    compare_with_printed_system,
    extract_system,
    printed_scale,
)
from cbkdv.core_model import (
    ReducedODECoefficients,
    TravelingWaveSolution,
    WaveCoefficients,
    evaluate,
    residual_ode,
    solve_coefficients,
    valid_sign_triples,
)
from cbkdv.errors import DegenerateWidth

from conftest import REF_SIGNS, random_params


def _sympy_system(cand, params):
    """P_k by symbolic expansion, as an independent oracle."""
    E = sp.symbols("E", positive=True)
    B0, B1, C1, D1, r, a, b, c = sp.symbols("B0 B1 C1 D1 r a b c")
    tanh = (E - 1 / E) / (E + 1 / E)
    sech = 2 / (E + 1 / E)
    u = B0 + B1 * tanh + D1 * sech
    d = lambda f: C1 * E * sp.diff(f, E)  # noqa: E731
    lhs = d(d(u)) + r * d(u) + a * u**3 + b * u**2 + c * u
    poly = sp.Poly(sp.cancel(lhs * (E + 1 / E) ** 3 * E**3), E)
    ode = ReducedODECoefficients.from_params(params, cand.v)
    values = {B0: cand.B0, B1: cand.B1, C1: cand.C1, D1: cand.D1,
              r: ode.r, a: ode.a, b: ode.b, c: ode.c}
    return np.array([complex(poly.coeff_monomial(E**k).subs(values)) for k in range(7)])


def test_sympy_oracle(ref_params):
    cand = CandidateVector(0.3, -0.4, 0.25, 0.6, -0.1)
    ours = extract_system(cand, ref_params).p
    ref = _sympy_system(cand, ref_params)
    assert np.allclose(ours, ref, rtol=1e-10, atol=1e-12)


def test_closed_form_annihilates_system(rng):
    worst = 0.0
    for params in random_params(rng, 50):
        for signs in valid_sign_triples():
            try:
                c = solve_coefficients(params, signs)
            except DegenerateWidth:
                continue
            sv = extract_system(CandidateVector.from_coefficients(c), params)
            worst = max(worst, sv.relative())
    assert worst < 1e-10


@pytest.mark.parametrize("xi", [-3.0, -1.0, 0.0, 1.0, 3.0])
def test_system_consistent_with_ode_residual(ref_params, xi):
    coeffs = WaveCoefficients(kappa=0.2, B0=0.3, B1=-0.4, C1=0.25, D1=0.6j, v=-0.1)
    sol = TravelingWaveSolution(ref_params, REF_SIGNS, coeffs)
    p = extract_system(CandidateVector.from_coefficients(coeffs), ref_params).p
    E = np.exp(coeffs.C1 * xi)
    poly = sum(p[k] * E**k for k in range(7))
    direct = residual_ode(sol, xi) * (E + 1 / E) ** 3 * E**3
    assert abs(poly - direct) <= 1e-10 * max(1.0, abs(direct))


def test_zero_and_perturbed_candidates(ref_params):
    zero = CandidateVector(0.0, 0.0, 1.0, 0.0, 0.0)
    assert extract_system(zero, ref_params).max_abs() == 0.0
    c = solve_coefficients(ref_params, REF_SIGNS)
    bumped = CandidateVector.from_coefficients(c)
    bumped = CandidateVector(bumped.B0 * 1.01, bumped.B1, bumped.C1, bumped.D1_imag, bumped.v)
    assert extract_system(bumped, ref_params).relative() > 1e-4
    with pytest.raises(DegenerateWidth):
        extract_system(CandidateVector(1, 1, 0.0, 0, 0), ref_params)


def test_printed_system_comparison(ref_params):
    c = CandidateVector.from_coefficients(solve_coefficients(ref_params, REF_SIGNS))
    report = compare_with_printed_system(c, ref_params)
    assert report.scale_factor == printed_scale(ref_params) == 3.0
    for row in report.rows[1:]:
        assert row.discrepancy < 1e-12
    # the transcribed k=0 condition does not vanish at the closed form
    assert report.rows[0].discrepancy == pytest.approx(0.8012, abs=1e-3)


def test_printed_rows_agree_off_solution(ref_params):
    c = CandidateVector(0.3, -0.4, 0.25, 0.6, -0.1)
    report = compare_with_printed_system(c, ref_params)
    for row in report.rows[1:]:
        assert row.discrepancy < 1e-12 * max(1.0, abs(row.printed))


def test_extract_matches_profile_at_points(ref_solution):
    # sanity: the ansatz reproduces evaluate() and vanishes pointwise
    xi = np.linspace(-5, 5, 11)
    assert np.max(np.abs(residual_ode(ref_solution, xi))) < 1e-14
    assert np.all(np.isfinite(evaluate(ref_solution, xi, 0.0)))
