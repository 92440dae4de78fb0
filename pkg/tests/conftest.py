import numpy as np
import pytest

from cbkdv.core_model import PhysicalParameters, SignTriple, TravelingWaveSolution

REF = PhysicalParameters(alpha=0.05, beta=-0.15, mu=0.5, s=1.0)
REF_SIGNS = SignTriple(1, -1, -1, 1)


def random_params(rng, n):
    """Valid parameter sets drawn from a fixed box."""
    out = []
    for _ in range(n):
        out.append(
            PhysicalParameters(
                alpha=rng.uniform(0.05, 2.0),
                beta=-rng.uniform(0.05, 2.0),
                mu=rng.uniform(0.05, 2.0),
                s=rng.uniform(0.2, 3.0),
            )
        )
    return out


@pytest.fixture
def ref_params():
    return REF


@pytest.fixture
def ref_solution():
    return TravelingWaveSolution.build(REF, REF_SIGNS)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE_LINES = []


def record_criterion(label, passed, detail=""):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {label}: {detail}"
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
