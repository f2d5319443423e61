import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from densepf import kernels

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def fixed_matrix(n):
    """a_ij = (1 + (3i + 5j) mod 7) / 8; exact values frozen from a Fraction oracle."""
    return np.array([[(1 + (3 * i + 5 * j) % 7) / 8 for j in range(n)] for i in range(n)])


def fixed_symmetric(n):
    return np.array([[0.0 if i == j else (1 + (i + j + i * j) % 5) / 5 for j in range(n)]
                     for i in range(n)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    return kernels.backends()[request.param]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
