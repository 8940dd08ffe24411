"""Second-order finite-difference vector calculus on collocated grids.

Interior nodes use centered differences; face nodes use one-sided
second-order stencils (``numpy.gradient`` with ``edge_order=2``).  With
centered stencils the discrete mixed partials commute, so curl(grad u)
and div(curl A) vanish identically away from the faces.
"""
from __future__ import annotations

import itertools

import numpy as np

from .grid import GridError, ScalarField, VectorField, same_grid


def levi_civita(j, m, q):
    """Permutation symbol on 1-based indices: e(1,2,3) = 1."""
    for idx in (j, m, q):
        if idx not in (1, 2, 3):
            raise ValueError(f"Levi-Civita index out of range: {idx}")
    if len({j, m, q}) < 3:
        return 0
    # count inversions: even permutations of (1,2,3) have an even count
    inversions = (j > m) + (j > q) + (m > q)
    return 1 if inversions % 2 == 0 else -1


LEVI_CIVITA = np.zeros((3, 3, 3))
for _j, _m, _q in itertools.product(range(3), repeat=3):
    LEVI_CIVITA[_j, _m, _q] = levi_civita(_j + 1, _m + 1, _q + 1)


def _require_stencil(grid):
    if grid.n < 3:
        raise GridError(f"centered stencils need n >= 3, got n = {grid.n}")


def partial(values, h, axis):
    """d/dx_axis of a (n, n, n) array."""
    return np.gradient(values, h, axis=axis, edge_order=2)


def _jacobian(A):
    """D[m, q] = d A_q / d x_m, shape (3, 3, n, n, n)."""
    h = A.grid.h
    return np.stack([np.stack([partial(A.values[q], h, m) for q in range(3)]) for m in range(3)])


def grad(u: ScalarField) -> VectorField:
    _require_stencil(u.grid)
    return VectorField(u.grid, np.stack([partial(u.values, u.grid.h, d) for d in range(3)]))


def div(A: VectorField) -> ScalarField:
    _require_stencil(A.grid)
    h = A.grid.h
    return ScalarField(A.grid, sum(partial(A.values[d], h, d) for d in range(3)))


def curl(A: VectorField) -> VectorField:
    """(curl A)_j = e_jmq d_m A_q."""
    _require_stencil(A.grid)
    return VectorField(A.grid, np.einsum("jmq,mq...->j...", LEVI_CIVITA, _jacobian(A)))


def _second_difference(values, h, axis):
    f = np.moveaxis(values, axis, 0)
    d2 = np.empty_like(f)
    d2[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / h**2
    # faces reuse the neighbouring 3-point stencil; still exact on quadratics
    d2[0] = d2[1]
    d2[-1] = d2[-2]
    return np.moveaxis(d2, 0, axis)


def laplacian_values(values, h):
    return sum(_second_difference(values, h, d) for d in range(3))


def laplacian(u: ScalarField) -> ScalarField:
    _require_stencil(u.grid)
    return ScalarField(u.grid, laplacian_values(u.values, u.grid.h))


def vector_laplacian(A: VectorField) -> VectorField:
    """Componentwise 7-point Laplacian."""
    _require_stencil(A.grid)
    return VectorField(A.grid, np.stack([laplacian_values(A.values[d], A.grid.h) for d in range(3)]))


def trapezoid_weights(grid):
    w1 = np.ones(grid.n)
    w1[0] = w1[-1] = 0.5
    return grid.h**3 * w1[:, None, None] * w1[None, :, None] * w1[None, None, :]


def integrate(values, grid):
    """Trapezoidal integral of a (n, n, n) array over the grid cube."""
    return float(np.sum(trapezoid_weights(grid) * values))


def dot_integral(F: VectorField, G: VectorField) -> float:
    """Trapezoidal approximation of the integral of F . G over the cube."""
    grid = same_grid(F.grid, G.grid)
    return integrate(np.sum(F.values * G.values, axis=0), grid)


def norm_l2(F) -> float:
    if F.kind == "scalar":
        return float(np.sqrt(integrate(F.values**2, F.grid)))
    return float(np.sqrt(dot_integral(F, F)))


def interior_sup(values, grid, depth=2):
    """Sup-norm over nodes at least ``depth`` cells from every face.

    ``values`` may be scalar (n, n, n) or vector (3, n, n, n); vectors are
    measured by their Euclidean magnitude.
    """
    values = np.asarray(values)
    if values.ndim == 4:
        values = np.sqrt(np.sum(values**2, axis=0))
    inner = values[grid.interior_slice(depth)]
    return float(np.max(np.abs(inner))) if inner.size else 0.0
