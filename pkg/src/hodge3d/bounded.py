"""Box-domain recovery: -Lap A = curl a - grad f inside, A = phi on the faces.

Each component is an independent 7-point Dirichlet problem on the
interior nodes, solved matrix-free by Jacobi-preconditioned conjugate
gradients.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import ops
from .grid import Grid3, GridError, ScalarField, VectorField, same_grid

log = logging.getLogger(__name__)


class ConvergenceError(RuntimeError):
    def __init__(self, message, residual, iterations):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True, eq=False)
class BoundaryTrace:
    """Vector values on the outermost node shell, in x-fastest node order."""

    grid: Grid3
    values: np.ndarray  # (3, number of boundary nodes)

    def __post_init__(self):
        count = int(self.grid.boundary_mask().sum())
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.shape != (3, count):
            raise GridError(f"trace has shape {values.shape}, expected {(3, count)}")
        if not np.all(np.isfinite(values)):
            raise GridError("trace contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def fill(self, interior=None):
        """Full (3, n, n, n) array with the trace on the shell."""
        out = np.zeros((3,) + self.grid.shape) if interior is None else np.array(interior, dtype=float)
        mask = self.grid.boundary_mask()
        for d in range(3):
            # transpose so boolean indexing walks nodes x-fastest
            out[d].T[mask.T] = self.values[d]
        return out


def boundary_trace(A: VectorField) -> BoundaryTrace:
    mask = A.grid.boundary_mask()
    return BoundaryTrace(A.grid, np.stack([A.values[d].T[mask.T] for d in range(3)]))


def _apply_neg_laplacian(v, h):
    """-Lap_h on interior unknowns ``v`` (shape (m, m, m)) with zero boundary."""
    p = np.pad(v, 1)
    out = 6.0 * v
    out -= p[2:, 1:-1, 1:-1] + p[:-2, 1:-1, 1:-1]
    out -= p[1:-1, 2:, 1:-1] + p[1:-1, :-2, 1:-1]
    out -= p[1:-1, 1:-1, 2:] + p[1:-1, 1:-1, :-2]
    return out / (h * h)


def _pcg(b, h, tol, maxiter):
    """Jacobi-preconditioned CG for -Lap_h x = b; returns (x, rel_residual, iterations)."""
    bnorm = np.linalg.norm(b)
    x = np.zeros_like(b)
    if bnorm == 0.0:
        return x, 0.0, 0
    inv_diag = h * h / 6.0
    r = b.copy()
    z = inv_diag * r
    p = z.copy()
    rz = float(np.vdot(r, z))
    rel = 1.0
    for it in range(1, maxiter + 1):
        Ap = _apply_neg_laplacian(p, h)
        alpha = rz / float(np.vdot(p, Ap))
        x += alpha * p
        r -= alpha * Ap
        rel = np.linalg.norm(r) / bnorm
        if rel <= tol:
            return x, rel, it
        z = inv_diag * r
        rz_new = float(np.vdot(r, z))
        p *= rz_new / rz
        p += z
        rz = rz_new
    return x, rel, maxiter


def solve_dirichlet(rhs: np.ndarray, phi: BoundaryTrace, tol=1e-10, maxiter=None):
    """Solve -Lap_h A = rhs (interior), A = phi (shell), componentwise.

    ``rhs`` has shape (3, n, n, n); its shell values are ignored.
    Returns the (3, n, n, n) solution array and per-component
    (relative residual, iterations) pairs.
    """
    grid = phi.grid
    n, h = grid.n, grid.h
    if n < 3:
        raise GridError("need n >= 3 for interior unknowns")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    maxiter = 10 * n**3 if maxiter is None else maxiter
    full = phi.fill()
    inner = grid.interior_slice(1)
    stats = []
    for d in range(3):
        # move known shell values to the right-hand side
        shell = full[d].copy()
        shell[inner] = 0.0
        b = rhs[d][inner] + ops.laplacian_values(shell, h)[inner]
        x, rel, its = _pcg(b, h, tol, maxiter)
        log.debug("component %d: %d iterations, relative residual %.3e", d, its, rel)
        if rel > tol:
            raise ConvergenceError(
                f"component {d}: CG did not reach tol={tol:g} in {maxiter} iterations "
                f"(final relative residual {rel:.3e})", rel, its)
        full[d][inner] = x
        stats.append((rel, its))
    return full, stats


def dirichlet_reconstruct(a: VectorField, f: ScalarField, phi: BoundaryTrace, tol=1e-10,
                          maxiter=None) -> VectorField:
    """Recover A in the box from curl ``a``, divergence ``f`` and trace ``phi``."""
    grid = same_grid(a.grid, f.grid, phi.grid)
    rhs = (ops.curl(a) - ops.grad(f)).values
    values, _ = solve_dirichlet(rhs, phi, tol, maxiter)
    return VectorField(grid, values)
