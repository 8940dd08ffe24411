import numpy as np
import pytest

from hodge3d import ops
from hodge3d.analytic import GRADIENT, MIXED, SLOW_DECAY, SOLENOIDAL
from hodge3d.grid import (
    DecayError,
    GridError,
    ScalarField,
    VectorField,
    make_centered_grid,
    sample,
)
from hodge3d.reconstruct import reconstruct_alternative, reconstruct_from_curl_div, uniqueness_residual
from hodge3d.decompose import decompose

from conftest import sampled


def rel_l2(X, ref):
    return ops.norm_l2(X - ref) / ops.norm_l2(ref)


@pytest.mark.parametrize("route", [reconstruct_from_curl_div, reconstruct_alternative])
def test_zero_data(route):
    g = make_centered_grid(9, 2.0)
    A = route(VectorField(g, np.zeros((3,) + g.shape)), ScalarField(g, np.zeros(g.shape)))
    assert not A.values.any()


@pytest.mark.parametrize("fld", [GRADIENT, SOLENOIDAL, MIXED], ids=lambda f: f.name)
def test_roundtrip_error_shrinks(fld):
    errs = []
    for n, L in ((17, 4.0), (33, 6.0)):
        A, a, f = sampled(fld, n, L)
        errs.append(rel_l2(reconstruct_from_curl_div(a, f), A))
    assert errs[1] < errs[0] < 0.2


def test_curl_free_data_gives_gradient():
    A, a, f = sampled(GRADIENT, 33, 6.0)
    assert not a.values.any()
    R = reconstruct_from_curl_div(a, f)
    # oracle: analytic grad of exp(-|x|^2)
    assert rel_l2(R, A) < 0.12


def test_alternative_matches_primary():
    A, a, f = sampled(MIXED, 33, 6.0)
    R5 = reconstruct_from_curl_div(a, f)
    R7 = reconstruct_alternative(a, f)
    err = rel_l2(R5, A)
    assert ops.norm_l2(R5 - R7) / ops.norm_l2(A) <= 10 * err


def test_alternative_divergence_free_equals_decompose_B():
    A, a, f = sampled(SOLENOIDAL, 33, 6.0)
    zero_f = ScalarField(a.grid, np.zeros(a.grid.shape))
    R = reconstruct_alternative(ops.curl(A), zero_f)
    B = decompose(A).B
    np.testing.assert_allclose(R.values, B.values, atol=1e-12)


def test_linearity_in_data():
    _, a1, f1 = sampled(GRADIENT, 17, 4.0)
    _, a2, f2 = sampled(SOLENOIDAL, 17, 4.0)
    lhs = reconstruct_from_curl_div(2.0 * a1 + a2, 2.0 * f1 + f2).values
    rhs = 2.0 * reconstruct_from_curl_div(a1, f1).values + reconstruct_from_curl_div(a2, f2).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_grid_mismatch():
    _, a, _ = sampled(MIXED, 17, 4.0)
    _, _, f = sampled(MIXED, 17, 6.0)
    with pytest.raises(GridError):
        reconstruct_from_curl_div(a, f)


def test_slow_decay_rejected_unless_waived():
    _, a, f = sampled(SLOW_DECAY, 17, 4.0)
    with pytest.raises(DecayError):
        reconstruct_from_curl_div(a, f)
    with pytest.raises(DecayError):
        reconstruct_alternative(a, f)
    R = reconstruct_from_curl_div(a, f, allow_slow_decay=True)
    assert np.isfinite(R.values).all()


def test_direct_backend_route():
    A, a, f = sampled(MIXED, 9, 3.0)
    fast = reconstruct_from_curl_div(a, f, "fft-conv").values
    slow = reconstruct_from_curl_div(a, f, "direct").values
    np.testing.assert_allclose(fast, slow, atol=1e-12)


def test_uniqueness_identical_fields():
    A, _, _ = sampled(MIXED, 17, 4.0)
    rep = uniqueness_residual(A, A)
    assert rep.curl_inf == rep.div_inf == rep.laplacian_inf == rep.shell_inf == rep.diff_inf == 0.0


def test_uniqueness_flags_constant_offset():
    A, _, _ = sampled(MIXED, 17, 4.0)
    c = np.array([0.3, -0.4, 1.2])
    shifted = VectorField(A.grid, A.values + c.reshape(3, 1, 1, 1))
    rep = uniqueness_residual(A, shifted)
    assert rep.curl_inf <= 1e-13 and rep.div_inf <= 1e-13 and rep.laplacian_inf <= 1e-11
    assert rep.shell_inf == pytest.approx(np.linalg.norm(c), rel=1e-12)
    assert rep.flags_nonuniqueness(1e-8)
    assert rep.maximum_principle_holds(1e-12)


def test_uniqueness_two_formulas():
    A, a, f = sampled(MIXED, 33, 6.0)
    R5, R7 = reconstruct_from_curl_div(a, f), reconstruct_alternative(a, f)
    rep = uniqueness_residual(R5, R7)
    budget = ops.norm_l2(R5 - A) / ops.norm_l2(A) * A.norm_inf()
    assert rep.laplacian_inf <= budget
    assert rep.shell_inf <= budget
    assert not rep.flags_nonuniqueness(budget)
