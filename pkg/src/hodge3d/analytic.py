"""Closed-form test fields and the radial decay-integral estimates.

Every field function takes coordinates shaped ``(3, ...)`` and returns an
array of the same trailing shape (scalar) or ``(3, ...)`` (vector), so the
same callables serve grid sampling and scattered-point checks.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .grid import GAMMA_POINTWISE, GAMMA_SOBOLEV, DecayClass

QUAD_TOL = 1e-9


@dataclass(frozen=True)
class AnalyticField:
    name: str
    field: Callable
    curl: Callable
    div: Callable
    decay: DecayClass
    curl_decay: DecayClass
    div_decay: DecayClass
    # A = grad(scalar_potential) + curl(vector_potential), when known
    scalar_potential: Optional[Callable] = None
    vector_potential: Optional[Callable] = None
    description: str = ""

    def part(self, which):
        """(callable, decay) for ``which`` in {'field', 'curl', 'div'}."""
        return {
            "field": (self.field, self.decay),
            "curl": (self.curl, self.curl_decay),
            "div": (self.div, self.div_decay),
        }[which]


def _r2(x):
    return np.sum(np.asarray(x) ** 2, axis=0)


def gaussian(x):
    return np.exp(-_r2(x))


def _zeros3(x):
    return np.zeros((3,) + np.shape(x)[1:])


def _grad_field(x):
    return -2.0 * np.asarray(x) * gaussian(x)


def _grad_div(x):
    return (4.0 * _r2(x) - 6.0) * gaussian(x)


def _sol_field(x):
    x1, x2, _ = x
    e = gaussian(x)
    return np.stack([-2.0 * x2 * e, 2.0 * x1 * e, 0.0 * e])


def _sol_curl(x):
    x1, x2, x3 = x
    e = gaussian(x)
    return np.stack([4.0 * x1 * x3 * e, 4.0 * x2 * x3 * e, (4.0 - 4.0 * x1**2 - 4.0 * x2**2) * e])


def _zero_scalar(x):
    return np.zeros(np.shape(x)[1:])


def _ez_potential(x):
    e = gaussian(x)
    return np.stack([0.0 * e, 0.0 * e, e])


def _slow_phi(x):
    return 1.0 / (1.0 + _r2(x))


def _slow_field(x):
    p = _slow_phi(x)
    return np.stack([p, 0.0 * p, 0.0 * p])


def _slow_curl(x):
    _, x2, x3 = x
    p2 = _slow_phi(x) ** 2
    return np.stack([0.0 * p2, -2.0 * x3 * p2, 2.0 * x2 * p2])


def _slow_div(x):
    return -2.0 * x[0] * _slow_phi(x) ** 2


GRADIENT = AnalyticField(
    name="gradient",
    field=_grad_field,
    curl=_zeros3,
    div=_grad_div,
    decay=DecayClass(4.0, 14.0),
    curl_decay=DecayClass(4.0, 1.0),
    div_decay=DecayClass(4.0, 22.0),
    scalar_potential=gaussian,
    description="grad exp(-|x|^2); curl-free",
)

SOLENOIDAL = AnalyticField(
    name="solenoidal",
    field=_sol_field,
    curl=_sol_curl,
    div=_zero_scalar,
    decay=DecayClass(4.0, 14.0),
    curl_decay=DecayClass(4.0, 75.0),
    div_decay=DecayClass(4.0, 1.0),
    vector_potential=_ez_potential,
    description="curl(exp(-|x|^2) e3); divergence-free",
)

MIXED = AnalyticField(
    name="mixed",
    field=lambda x: _grad_field(x) + _sol_field(x),
    curl=_sol_curl,
    div=_grad_div,
    decay=DecayClass(4.0, 20.0),
    curl_decay=DecayClass(4.0, 75.0),
    div_decay=DecayClass(4.0, 22.0),
    scalar_potential=gaussian,
    vector_potential=_ez_potential,
    description="sum of the gradient and solenoidal fields",
)

SLOW_DECAY = AnalyticField(
    name="slow-decay",
    field=_slow_field,
    curl=_slow_curl,
    div=_slow_div,
    decay=DecayClass(2.0, 2.5),
    curl_decay=DecayClass(3.0, 6.0),
    div_decay=DecayClass(3.0, 6.0),
    description="(1+|x|^2)^-1 e1; decays too slowly for the potential formulas",
)


def corpus():
    return [GRADIENT, SOLENOIDAL, MIXED, SLOW_DECAY]


def by_name(name):
    for f in corpus():
        if f.name == name:
            return f
    raise KeyError(f"no corpus field named {name!r}; have {[f.name for f in corpus()]}")


def random_smooth_scalar(rng, terms=3):
    """Random sum of anisotropic Gaussian bumps times a random plane wave."""
    amp = rng.normal(size=terms)
    centre = rng.uniform(-1.0, 1.0, size=(terms, 3))
    width = rng.uniform(0.5, 1.5, size=(terms, 3))
    k = rng.normal(size=3)

    def fn(x):
        x = np.asarray(x)
        wave = np.cos(np.tensordot(k, x, axes=1))
        total = 0.0
        for a, c, w in zip(amp, centre, width):
            d = (x - c.reshape((3,) + (1,) * (x.ndim - 1))) / w.reshape((3,) + (1,) * (x.ndim - 1))
            total = total + a * np.exp(-np.sum(d**2, axis=0))
        return total * wave

    return fn


def random_smooth_vector(rng, terms=3):
    parts = [random_smooth_scalar(rng, terms) for _ in range(3)]
    return lambda x: np.stack([p(x) for p in parts])


def _require_gamma(gamma, threshold):
    if not gamma > threshold:
        raise ValueError(f"gamma must exceed {threshold} (got {gamma}); the estimate does not apply")


def _tail(gamma, rho, power):
    """Integral over [rho, inf) of r^power (1+r)^-gamma, via t = 1/(1+r)."""
    # r = 1/t - 1, dr = -dt/t^2 maps [rho, inf) onto (0, 1/(1+rho)]
    val, _ = integrate.quad(
        lambda t: (1.0 / t - 1.0) ** power * t ** (gamma - 2.0),
        0.0, 1.0 / (1.0 + rho), epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200,
    )
    return val


def i1_integral(gamma, rho):
    """Radially reduced I1 for |x| = rho:

    (pi/rho) [2 int_0^rho r^2 (1+r)^-g dr + 2 rho int_rho^inf r (1+r)^-g dr]
    """
    _require_gamma(gamma, GAMMA_POINTWISE)
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    inner, _ = integrate.quad(lambda r: r * r * (1.0 + r) ** (-gamma), 0.0, rho,
                              epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    return np.pi / rho * (2.0 * inner + 2.0 * rho * _tail(gamma, rho, 1))


def i1_bound(gamma, rho):
    """Closed-form bound 2 pi / (rho (g-3)) + 2 pi / ((g-2) rho^(g-2))."""
    _require_gamma(gamma, GAMMA_POINTWISE)
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    return 2.0 * np.pi / (rho * (gamma - 3.0)) + 2.0 * np.pi / (gamma - 2.0) * rho ** (2.0 - gamma)


def i1_volume_integral(gamma, rho):
    """int_{R^3} dy / (|x-y| (1+|y|)^gamma) with |x| = rho, by 2-D quadrature.

    The polar angle is integrated numerically (no closed-form angular
    reduction), so this is an independent check on :func:`i1_integral`;
    it comes out at exactly twice that value.
    """
    _require_gamma(gamma, GAMMA_SOBOLEV)

    def shell(r):
        ang, _ = integrate.quad(lambda s: 1.0 / np.sqrt(max(r * r - 2 * r * rho * s + rho * rho, 1e-300)),
                                -1.0, 1.0, epsabs=1e-11, epsrel=1e-11, limit=200)
        return 2.0 * np.pi * r * r * (1.0 + r) ** (-gamma) * ang

    near, _ = integrate.quad(shell, 0.0, rho, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    far, _ = integrate.quad(shell, rho, np.inf, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    return near + far


def i2_integral(gamma, rho, cutoff=np.inf):
    """int dy / (|x-y|^2 (1+|y|)^gamma), |x| = rho, optionally over |y| < cutoff.

    Only finiteness for gamma > 2 is claimed; no closed-form bound.
    """
    _require_gamma(gamma, GAMMA_SOBOLEV)
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")

    def f(r):
        if r == 0.0:
            return 0.0
        return 2.0 * np.pi * r * (1.0 + r) ** (-gamma) / rho * np.log((r + rho) / abs(r - rho))

    hi = min(cutoff, rho)
    val, _ = integrate.quad(f, 0.0, hi, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=400)
    if cutoff > rho:
        more, _ = integrate.quad(f, rho, cutoff, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=400)
        val += more
    return val


def truncation_tail_estimate(decay: DecayClass, L, x=(0.0, 0.0, 0.0)):
    """Upper bound on |int_{|y|>L} s(y) / (4 pi |x-y|) dy| for |s| <= c (1+|y|)^-gamma.

    For |x| < L every shell r > L sees x inside it, so the angular average
    of 1/|x-y| is 1/r and the bound is c * int_L^inf r (1+r)^-gamma dr,
    independent of x.  Grids spanning [-L, L]^3 omit only points with
    |y| > L, so this also bounds their truncation error.
    """
    _require_gamma(decay.gamma, GAMMA_POINTWISE)
    if not L > np.linalg.norm(x):
        raise ValueError(f"need L > |x| (L={L}, |x|={np.linalg.norm(x)})")
    return decay.c * _tail(decay.gamma, L, 1)
