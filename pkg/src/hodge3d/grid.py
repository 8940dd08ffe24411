"""Regular cubic grids and the sampled field containers built on them.

Values are stored as numpy arrays indexed ``[i, j, k]`` (scalar) or
``[component, i, j, k]`` (vector), where ``i`` runs along x.  The on-disk
layout (x-fastest) is handled in :mod:`hodge3d.fieldio`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np


class GridError(ValueError):
    """Bad grid parameters, grid mismatch between fields, or bad samples."""


class DecayError(ValueError):
    """A field's decay class does not meet an operation's hypothesis."""


# gamma thresholds: pointwise decay for the potential formulas, and the
# weaker weighted-Sobolev exponent quoted for the decomposition theorem.
GAMMA_POINTWISE = 3.0
GAMMA_SOBOLEV = 2.0


@dataclass(frozen=True)
class Grid3:
    origin: tuple
    h: float
    n: int

    def __post_init__(self):
        origin = tuple(float(v) for v in self.origin)
        if len(origin) != 3:
            raise GridError(f"origin must have 3 components, got {len(origin)}")
        if not np.all(np.isfinite(origin)):
            raise GridError("origin must be finite")
        if not (np.isfinite(self.h) and self.h > 0):
            raise GridError(f"spacing h must be positive, got {self.h}")
        if int(self.n) != self.n or self.n < 2:
            raise GridError(f"n must be an integer >= 2, got {self.n}")
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "n", int(self.n))

    @property
    def shape(self):
        return (self.n, self.n, self.n)

    @property
    def half_width(self):
        """Half the side length, meaningful for centered grids."""
        return 0.5 * self.h * (self.n - 1)

    def axis(self, d):
        return self.origin[d] + self.h * np.arange(self.n)

    def node(self, i, j, k):
        return np.array(self.origin) + self.h * np.array([i, j, k], dtype=float)

    def coords(self):
        """Node coordinates as an array of shape (3, n, n, n)."""
        return np.stack(np.meshgrid(self.axis(0), self.axis(1), self.axis(2), indexing="ij"))

    def radius(self):
        return np.sqrt(np.sum(self.coords() ** 2, axis=0))

    def boundary_mask(self):
        """True on the outermost node shell (the six faces)."""
        mask = np.ones(self.shape, dtype=bool)
        mask[1:-1, 1:-1, 1:-1] = False
        return mask

    def interior_slice(self, depth=1):
        """Slice selecting nodes at least ``depth`` cells away from every face."""
        s = slice(depth, self.n - depth)
        return (s, s, s)


def make_centered_grid(n, half_width):
    """Grid with ``n`` nodes per axis spanning ``[-L, L]^3``."""
    if int(n) != n or n < 2:
        raise GridError(f"n must be an integer >= 2, got {n}")
    if not half_width > 0:
        raise GridError(f"half width must be positive, got {half_width}")
    L = float(half_width)
    return Grid3(origin=(-L, -L, -L), h=2.0 * L / (n - 1), n=int(n))


def same_grid(*grids):
    first = grids[0]
    for g in grids[1:]:
        if g != first:
            raise GridError(f"grid mismatch: {first} vs {g}")
    return first


@dataclass(frozen=True)
class DecayClass:
    """Pointwise envelope ``|F(x)| <= c (1 + |x|)^(-gamma)``."""

    gamma: float
    c: float

    def __post_init__(self):
        if not (self.gamma > 0 and self.c > 0):
            raise ValueError(f"decay class needs gamma > 0 and c > 0, got {self.gamma}, {self.c}")

    def envelope(self, r):
        return self.c * (1.0 + np.asarray(r)) ** (-self.gamma)


def _frozen(values):
    arr = np.array(values, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ScalarField:
    grid: Grid3
    values: np.ndarray
    decay: Optional[DecayClass] = None

    def __post_init__(self):
        values = _frozen(self.values)
        if values.shape != self.grid.shape:
            raise GridError(f"scalar values have shape {values.shape}, expected {self.grid.shape}")
        _check_finite(self.grid, values[None])
        object.__setattr__(self, "values", values)

    kind = "scalar"

    def norm_inf(self):
        return float(np.max(np.abs(self.values)))

    def __add__(self, other):
        same_grid(self.grid, other.grid)
        return ScalarField(self.grid, self.values + other.values)

    def __sub__(self, other):
        same_grid(self.grid, other.grid)
        return ScalarField(self.grid, self.values - other.values)

    def __neg__(self):
        return ScalarField(self.grid, -self.values, self.decay)

    def __mul__(self, alpha):
        return ScalarField(self.grid, alpha * self.values)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class VectorField:
    grid: Grid3
    values: np.ndarray
    decay: Optional[DecayClass] = None

    def __post_init__(self):
        values = _frozen(self.values)
        if values.shape != (3,) + self.grid.shape:
            raise GridError(f"vector values have shape {values.shape}, expected {(3,) + self.grid.shape}")
        _check_finite(self.grid, values)
        object.__setattr__(self, "values", values)

    kind = "vector"

    def magnitude(self):
        return np.sqrt(np.sum(self.values ** 2, axis=0))

    def norm_inf(self):
        return float(np.max(self.magnitude()))

    def component(self, j):
        return ScalarField(self.grid, self.values[j])

    def __add__(self, other):
        same_grid(self.grid, other.grid)
        return VectorField(self.grid, self.values + other.values)

    def __sub__(self, other):
        same_grid(self.grid, other.grid)
        return VectorField(self.grid, self.values - other.values)

    def __neg__(self):
        return VectorField(self.grid, -self.values, self.decay)

    def __mul__(self, alpha):
        return VectorField(self.grid, alpha * self.values)

    __rmul__ = __mul__


Field = Union[ScalarField, VectorField]


def _check_finite(grid, values):
    bad = ~np.isfinite(values)
    if bad.any():
        idx = np.argwhere(bad)[0]
        i, j, k = (int(v) for v in idx[1:])
        x = grid.node(i, j, k)
        raise GridError(f"non-finite value at node ({i}, {j}, {k}), x = {tuple(float(v) for v in x)}")


def zeros(grid, kind="vector"):
    if kind == "vector":
        return VectorField(grid, np.zeros((3,) + grid.shape))
    return ScalarField(grid, np.zeros(grid.shape))


def sample(grid: Grid3, fn: Callable, kind: Optional[str] = None, decay: Optional[DecayClass] = None) -> Field:
    """Evaluate ``fn`` at every node.

    ``fn`` receives the coordinate array of shape (3, n, n, n) and returns
    either a scalar array (broadcastable to (n, n, n)) or a (3, n, n, n)
    vector array.  Objects with ``field`` and ``decay`` attributes (see
    :class:`hodge3d.analytic.AnalyticField`) are accepted and tag the
    result with their decay class.
    """
    if hasattr(fn, "field") and hasattr(fn, "decay"):
        decay = fn.decay if decay is None else decay
        fn = fn.field
    x = grid.coords()
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.asarray(fn(x), dtype=np.float64)
    if kind is None:
        kind = "vector" if out.ndim == 4 and out.shape[0] == 3 else "scalar"
    if kind == "vector":
        out = np.broadcast_to(out, (3,) + grid.shape)
        return VectorField(grid, out, decay)
    out = np.broadcast_to(out, grid.shape)
    return ScalarField(grid, out, decay)


@dataclass(frozen=True)
class DecayReport:
    ok: bool
    worst_node: tuple
    worst_ratio: float


def check_decay(fld: Field, decay: DecayClass) -> DecayReport:
    """Test ``|F(x)| <= c (1+|x|)^(-gamma)`` at every node.

    The reported node maximises ``|F(x)| (1+|x|)^gamma / c``; ``ok`` is
    true iff that ratio is at most 1.
    """
    mag = np.abs(fld.values) if fld.kind == "scalar" else fld.magnitude()
    ratio = mag * (1.0 + fld.grid.radius()) ** decay.gamma / decay.c
    idx = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
    worst = float(ratio[idx])
    return DecayReport(ok=worst <= 1.0, worst_node=tuple(int(v) for v in idx), worst_ratio=worst)


def require_decay(fld: Field, min_gamma: float, what: str = "field") -> None:
    """Enforce a decay hypothesis on a tagged field; untagged fields pass.

    Raises :class:`DecayError` if the tag's exponent is not strictly above
    ``min_gamma`` or the samples break the envelope.
    """
    decay = fld.decay
    if decay is None:
        return
    if not decay.gamma > min_gamma:
        raise DecayError(f"{what}: decay exponent gamma={decay.gamma} must exceed {min_gamma}")
    report = check_decay(fld, decay)
    if not report.ok:
        raise DecayError(
            f"{what}: samples violate the decay envelope at node {report.worst_node} "
            f"(|F|(1+|x|)^gamma/c = {report.worst_ratio:.4g})"
        )
