import functools

import numpy as np
import pytest

from hodge3d.grid import make_centered_grid, sample

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@functools.lru_cache(maxsize=None)
def sampled(field, n, L):
    """(A, a, f) for a corpus field, with its decay tags."""
    grid = make_centered_grid(n, L)
    A = sample(grid, field.field, kind="vector", decay=field.decay)
    a = sample(grid, field.curl, kind="vector", decay=field.curl_decay)
    f = sample(grid, field.div, kind="scalar", decay=field.div_decay)
    return A, a, f


def gaussian(x):
    return np.exp(-np.sum(np.asarray(x) ** 2, axis=0))


@pytest.fixture
def rng():
    return np.random.default_rng(0)
