"""Recover a decaying field from its curl ``a`` and divergence ``f``.

Two equivalent routes (equal in the continuum by integration by parts):

* :func:`reconstruct_from_curl_div` -- N[curl a] - N[grad f]
* :func:`reconstruct_alternative`  -- curl N[a] - grad N[f]

where N is the componentwise Newtonian potential.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ops
from .grid import GAMMA_POINTWISE, VectorField, ScalarField, require_decay, same_grid
from .poisson import newtonian_potential, newtonian_potential_vec


def _check_inputs(a, f, allow_slow_decay):
    same_grid(a.grid, f.grid)
    if not allow_slow_decay:
        require_decay(a, GAMMA_POINTWISE, "curl data")
        require_decay(f, GAMMA_POINTWISE, "divergence data")


def reconstruct_from_curl_div(a: VectorField, f: ScalarField, backend="fft-conv",
                              allow_slow_decay=False) -> VectorField:
    """Potentials of the differentiated data: N[curl a] - N[grad f]."""
    _check_inputs(a, f, allow_slow_decay)
    source = ops.curl(a) - ops.grad(f)
    return newtonian_potential_vec(source, backend, allow_slow_decay=True)


def reconstruct_alternative(a: VectorField, f: ScalarField, backend="fft-conv",
                            allow_slow_decay=False) -> VectorField:
    """Differentiated potentials of the data: curl N[a] - grad N[f]."""
    _check_inputs(a, f, allow_slow_decay)
    p = newtonian_potential_vec(a, backend, allow_slow_decay=True)
    phi = newtonian_potential(f, backend, allow_slow_decay=True)
    return ops.curl(p) - ops.grad(phi)


@dataclass(frozen=True)
class UniquenessReport:
    """Residuals of the difference d = A1 - A2.

    curl/div/Laplacian residuals are sup-norms over nodes two cells in from
    the faces; ``shell_inf`` is the sup over the outermost node shell and
    ``diff_inf`` the sup over all nodes.
    """

    curl_inf: float
    div_inf: float
    laplacian_inf: float
    shell_inf: float
    diff_inf: float

    def flags_nonuniqueness(self, tol):
        """True when d is (discretely) curl- and divergence-free yet does not
        vanish on the boundary shell: a harmonic difference the decay
        hypothesis would have excluded."""
        return self.curl_inf <= tol and self.div_inf <= tol and self.shell_inf > tol

    def maximum_principle_holds(self, tol=0.0):
        return self.diff_inf <= self.shell_inf + tol


def uniqueness_residual(A1: VectorField, A2: VectorField) -> UniquenessReport:
    grid = same_grid(A1.grid, A2.grid)
    d = A1 - A2
    mag = d.magnitude()
    return UniquenessReport(
        curl_inf=ops.interior_sup(ops.curl(d).values, grid),
        div_inf=ops.interior_sup(ops.div(d).values, grid),
        laplacian_inf=ops.interior_sup(ops.vector_laplacian(d).values, grid),
        shell_inf=float(np.max(mag[grid.boundary_mask()])),
        diff_inf=float(np.max(mag)),
    )
