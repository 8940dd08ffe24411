import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodge3d.grid import (
    DecayClass,
    Grid3,
    GridError,
    ScalarField,
    VectorField,
    check_decay,
    make_centered_grid,
    sample,
)

from conftest import gaussian


def test_centered_grid_n3():
    g = make_centered_grid(3, 1.0)
    assert g.h == 1.0
    np.testing.assert_array_equal(g.axis(0), [-1.0, 0.0, 1.0])
    assert set(np.unique(g.coords())) == {-1.0, 0.0, 1.0}


def test_centered_grid_n2():
    g = make_centered_grid(2, 0.5)
    assert g.h == 1.0
    np.testing.assert_array_equal(g.axis(2), [-0.5, 0.5])


def test_centered_grid_n65_centre():
    g = make_centered_grid(65, 8.0)
    assert g.h == 0.25
    np.testing.assert_array_equal(g.node(32, 32, 32), [0.0, 0.0, 0.0])


@pytest.mark.parametrize("n, L", [(1, 1.0), (0, 1.0), (5, 0.0), (5, -1.0), (2.5, 1.0)])
def test_centered_grid_rejects(n, L):
    with pytest.raises(GridError):
        make_centered_grid(n, L)


def test_grid3_rejects_bad_spacing():
    with pytest.raises(GridError):
        Grid3(origin=(0, 0, 0), h=0.0, n=4)


def test_sample_zero_and_gaussian():
    g = make_centered_grid(5, 2.0)
    z = sample(g, lambda x: 0.0)
    assert isinstance(z, ScalarField)
    assert not z.values.any()
    u = sample(g, gaussian)
    assert u.values[2, 2, 2] == 1.0


def test_sample_nonfinite_names_node():
    g = make_centered_grid(5, 2.0)
    with pytest.raises(GridError, match=r"\(2, 2, 2\)"):
        sample(g, lambda x: 1.0 / np.sqrt(np.sum(x**2, axis=0)))


def test_sample_reproduces_function_at_nodes():
    g = make_centered_grid(9, 3.0)
    A = sample(g, lambda x: np.stack([x[0] * x[1], np.sin(x[2]), gaussian(x)]))
    for i, j, k in [(0, 0, 0), (3, 7, 1), (8, 8, 8)]:
        x = g.node(i, j, k)
        expect = [x[0] * x[1], np.sin(x[2]), np.exp(-x @ x)]
        assert list(A.values[:, i, j, k]) == expect


def test_fields_are_immutable():
    g = make_centered_grid(3, 1.0)
    A = VectorField(g, np.zeros((3, 3, 3, 3)))
    with pytest.raises(ValueError):
        A.values[0, 0, 0, 0] = 1.0


def test_check_decay_zero_field():
    g = make_centered_grid(5, 2.0)
    assert check_decay(VectorField(g, np.zeros((3,) + g.shape)), DecayClass(7.0, 0.1)).ok


def test_check_decay_gaussian_envelope():
    # independent 1-D scan: max of e^{-r^2}(1+r)^4 on [0, 4*sqrt(3)] is below 16
    r = np.linspace(0.0, 4.0 * np.sqrt(3.0), 200001)
    assert np.max(np.exp(-r * r) * (1 + r) ** 4) < 16
    g = make_centered_grid(33, 4.0)
    A = sample(g, lambda x: gaussian(x) * np.array([1.0, 0, 0]).reshape(3, 1, 1, 1))
    assert check_decay(A, DecayClass(4.0, 16.0)).ok


def test_check_decay_constant_fails_at_corner():
    g = make_centered_grid(9, 2.0)
    A = sample(g, lambda x: np.ones_like(x) * np.array([1.0, 0, 0]).reshape(3, 1, 1, 1))
    rep = check_decay(A, DecayClass(4.0, 1.0))
    assert not rep.ok
    assert all(i in (0, 8) for i in rep.worst_node)


@settings(max_examples=30, deadline=None)
@given(gamma=st.floats(0.5, 6.0), c=st.floats(0.1, 50.0), factor=st.floats(1.0, 10.0))
def test_check_decay_monotone_in_c(gamma, c, factor):
    g = make_centered_grid(5, 3.0)
    A = sample(g, lambda x: np.stack([gaussian(x)] * 3))
    if check_decay(A, DecayClass(gamma, c)).ok:
        assert check_decay(A, DecayClass(gamma, c * factor)).ok


def test_grid_mismatch_in_arithmetic():
    a = ScalarField(make_centered_grid(3, 1.0), np.zeros((3, 3, 3)))
    b = ScalarField(make_centered_grid(3, 2.0), np.zeros((3, 3, 3)))
    with pytest.raises(GridError):
        a - b
