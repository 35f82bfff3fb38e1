import numpy as np
import pytest

from mrminsum import ParityMatrix, build_parity_matrix
from mrminsum.kernels import available_backends

# Check sets of the 10-bit Tanner graph example, 1-based.
EXAMPLE_SETS = [
    {1, 2, 3, 6, 7, 10},
    {1, 3, 5, 6, 8, 9},
    {3, 4, 5, 7, 9, 10},
    {2, 4, 5, 6, 8, 10},
    {1, 2, 4, 7, 8, 9},
]


@pytest.fixture
def example_h():
    return build_parity_matrix(EXAMPLE_SETS, 10)


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


def random_parity(rng, m_range=(3, 20), n_range=(6, 40), deg_range=(2, 6)) -> ParityMatrix:
    m = int(rng.integers(m_range[0], m_range[1] + 1))
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    dense = np.zeros((m, n), dtype=np.uint8)
    for i in range(m):
        d = int(rng.integers(deg_range[0], min(deg_range[1], n) + 1))
        dense[i, rng.choice(n, size=d, replace=False)] = 1
    return ParityMatrix.from_dense(dense)


def random_frame(rng, n, kind=None):
    """Channel-like values; some kinds quantize so that zeros and ties occur."""
    kind = kind if kind is not None else int(rng.integers(0, 3))
    if kind == 0:
        return -1.0 + rng.normal(0.0, 0.8, n)
    if kind == 1:
        return rng.normal(0.0, 1.0, n)
    return np.round(rng.normal(-0.5, 1.0, n) * 2.0) / 2.0


# -- acceptance reporting ----------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
