"""Newtonian potential N[s](x) = integral of s(y) / (4 pi |x - y|) dy on a grid.

Two backends evaluate the same discrete sum
``sum_y G(x - y) s(y)`` with ``G(d) = h^3 / (4 pi |d|)`` off the diagonal
and ``G(0)`` equal to the integral of the kernel over the cell centred on
the singularity:

``direct``
    brute-force pairwise summation, O(N^2); the reference implementation.
``fft-conv``
    the same sum as a zero-padded (free-space, non-periodic) cyclic
    convolution with the tabulated kernel.

The integral is truncated to the grid cube; see
:func:`hodge3d.analytic.truncation_tail_estimate` for the omitted tail.
"""
from __future__ import annotations

import enum
import functools

import numpy as np
import scipy.fft
from scipy import integrate

from .grid import GAMMA_POINTWISE, GridError, ScalarField, VectorField, require_decay, same_grid
from .ops import laplacian_values

FOUR_PI = 4.0 * np.pi

# scipy.fft worker count; set from the CLI --threads flag
_workers = {"n": None}


def set_workers(n):
    _workers["n"] = None if n is None else int(n)


class PoissonBackend(str, enum.Enum):
    DIRECT = "direct"
    FFT_CONV = "fft-conv"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            choices = ", ".join(b.value for b in cls)
            raise ValueError(f"unknown backend {value!r} (choose from {choices})") from None


@functools.lru_cache(maxsize=None)
def unit_cube_inverse_distance():
    """Integral of 1/|y| over the unit cube centred at the origin.

    Splitting the cube into six pyramids with apex at the centre reduces
    each to ``(d/2) * integral over the face of 1/|y| dA`` with d = 1/2,
    a smooth 2-D integrand.
    """
    face, _ = integrate.dblquad(
        lambda z, y: 1.0 / np.sqrt(0.25 + y * y + z * z),
        -0.5, 0.5, -0.5, 0.5,
        epsabs=1e-13, epsrel=1e-13,
    )
    return 6.0 * 0.25 * face


def singular_weight(h):
    """Integral of 1/(4 pi |y|) over the cube of side h centred at 0."""
    return h * h * unit_cube_inverse_distance() / FOUR_PI


def kernel_weight(offsets, h):
    """Quadrature weight G(d) for integer offset vectors ``offsets[..., 3]``."""
    d = np.sqrt(np.sum(np.asarray(offsets, dtype=float) ** 2, axis=-1))
    with np.errstate(divide="ignore"):
        w = h * h / (FOUR_PI * d)
    return np.where(d == 0, singular_weight(h), w)


@functools.lru_cache(maxsize=8)
def _kernel_spectrum(n, h):
    m = 2 * n
    idx = np.arange(m)
    # cyclic offsets: 0..n-1 then -n..-1; the row at -n is never reached
    off = np.where(idx < n, idx, idx - m)
    d = np.stack(np.meshgrid(off, off, off, indexing="ij"), axis=-1)
    table = kernel_weight(d, h)
    return scipy.fft.rfftn(table, workers=_workers["n"])


def _potential_fft(values, grid):
    n = grid.n
    m = 2 * n
    spec = scipy.fft.rfftn(values, s=(m, m, m), workers=_workers["n"])
    spec *= _kernel_spectrum(n, grid.h)
    out = scipy.fft.irfftn(spec, s=(m, m, m), workers=_workers["n"])
    return out[:n, :n, :n].copy()


def _potential_direct(values, grid, chunk=512):
    n = grid.n
    idx = np.stack(np.meshgrid(*(np.arange(n),) * 3, indexing="ij"), axis=-1).reshape(-1, 3)
    src = values.reshape(-1)
    keep = src != 0
    src_idx = idx[keep]
    src_val = src[keep]
    out = np.zeros(n**3)
    if src_val.size == 0:
        return out.reshape(grid.shape)
    for start in range(0, n**3, chunk):
        tgt = idx[start:start + chunk]
        w = kernel_weight(tgt[:, None, :] - src_idx[None, :, :], grid.h)
        out[start:start + chunk] = w @ src_val
    return out.reshape(grid.shape)


def newtonian_potential(s: ScalarField, backend="fft-conv", allow_slow_decay=False) -> ScalarField:
    """Free-space solution of -Laplace(u) = s, evaluated on the grid of ``s``."""
    backend = PoissonBackend.parse(backend)
    if not allow_slow_decay:
        require_decay(s, GAMMA_POINTWISE, "source")
    if backend is PoissonBackend.DIRECT:
        vals = _potential_direct(s.values, s.grid)
    else:
        vals = _potential_fft(s.values, s.grid)
    return ScalarField(s.grid, vals)


def newtonian_potential_vec(s: VectorField, backend="fft-conv", allow_slow_decay=False) -> VectorField:
    backend = PoissonBackend.parse(backend)
    if not allow_slow_decay:
        require_decay(s, GAMMA_POINTWISE, "source")
    comps = [newtonian_potential(s.component(d), backend).values for d in range(3)]
    return VectorField(s.grid, np.stack(comps))


def residual_laplacian(u: ScalarField, s: ScalarField) -> float:
    """max |-Lap_h u - s| over nodes >= 2h from the faces, divided by max |s|.

    Reported unnormalised when ``s`` vanishes identically.
    """
    grid = same_grid(u.grid, s.grid)
    if grid.n < 5:
        raise GridError("residual_laplacian needs n >= 5 to have nodes 2h from the faces")
    inner = grid.interior_slice(2)
    res = float(np.max(np.abs(-laplacian_values(u.values, grid.h) - s.values)[inner]))
    scale = float(np.max(np.abs(s.values)))
    return res / scale if scale > 0 else res
