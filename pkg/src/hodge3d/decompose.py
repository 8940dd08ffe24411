"""Helmholtz-Hodge split A = grad u + B with numerical diagnostics.

u = -N[div A] and B = curl N[curl A]; the potentials fix the gauge of u,
so no additive constant is left free.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import ops
from .grid import GAMMA_POINTWISE, GAMMA_SOBOLEV, ScalarField, VectorField, require_decay, same_grid
from .poisson import newtonian_potential, newtonian_potential_vec

# --strict thresholds on the diagnostics
STRICT_LIMITS = {
    "orthogonality": 0.05,
    "recomposition_rel_l2": 0.05,
}

_EPS = 1e-300


@dataclass(frozen=True)
class Diagnostics:
    orthogonality: float
    div_B_inf: float
    curl_gradu_inf: float
    recomposition_rel_l2: float

    def as_dict(self):
        return asdict(self)

    def violations(self, limits=None):
        limits = STRICT_LIMITS if limits is None else limits
        return {k: getattr(self, k) for k, lim in limits.items() if not getattr(self, k) <= lim}


@dataclass(frozen=True)
class DecompositionResult:
    u: ScalarField
    B: VectorField
    diagnostics: Diagnostics

    @property
    def grad_u(self):
        return ops.grad(self.u)


def orthogonality_integral(u: ScalarField, p: VectorField) -> float:
    """Trapezoidal integral of grad u . curl p over the grid cube."""
    same_grid(u.grid, p.grid)
    return ops.dot_integral(ops.grad(u), ops.curl(p))


def decompose(A: VectorField, backend="fft-conv", strict=False, allow_slow_decay=False) -> DecompositionResult:
    """Split ``A``; ``strict`` raises the decay requirement from gamma > 2 to gamma > 3."""
    if not allow_slow_decay:
        require_decay(A, GAMMA_POINTWISE if strict else GAMMA_SOBOLEV, "input field")
    grid = A.grid
    u = -newtonian_potential(ops.div(A), backend, allow_slow_decay=True)
    p = newtonian_potential_vec(ops.curl(A), backend, allow_slow_decay=True)
    B = ops.curl(p)
    gu = ops.grad(u)

    denom = ops.norm_l2(gu) * ops.norm_l2(B)
    ortho = abs(ops.dot_integral(gu, B)) / denom if denom > _EPS else 0.0
    a_norm = ops.norm_l2(A)
    recomposed = ops.norm_l2(gu + B - A)
    diag = Diagnostics(
        orthogonality=float(ortho),
        div_B_inf=ops.interior_sup(ops.div(B).values, grid),
        curl_gradu_inf=ops.interior_sup(ops.curl(gu).values, grid),
        recomposition_rel_l2=float(recomposed / a_norm) if a_norm > _EPS else float(recomposed),
    )
    return DecompositionResult(u=u, B=B, diagnostics=diag)


def gauge_match(u: ScalarField, reference: np.ndarray) -> np.ndarray:
    """Shift ``reference`` by the mean difference so it shares u's gauge."""
    return reference + float(np.mean(u.values - reference))
