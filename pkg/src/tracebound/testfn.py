"""Admissible test-function pairs and their spherical transforms.

A pair is ``(h, hhat)`` with ``hhat`` the Fourier transform of ``h``:

    h(z) = int hhat(x) exp(-2 pi i z x) dx.

The construction starts from the bump ``g0(x) = exp(-1 / (1 - (x/b)^2))`` on
``(-b, b)``, forms ``g1 = g0 * g0`` and sets ``hhat1 = g1 / g1(0)``.  Then
``h1 = |FT g0|^2 / g1(0)`` is nonnegative on the real line, and ``h1(iy)`` is
positive because ``g1 >= 0``.  A dilation ``hhat(x) = hhat1(x / delta)`` keeps
``hhat(0) = 1`` while shrinking the support to ``2 b delta``.

The spherical function attached to the pair at a real place is

    phi(r) = -1/(4 pi^2) int_{r/2pi}^inf hhat'(t) / sqrt(sinh(pi t)^2 - sinh(r/2)^2) dt

and at a complex place ``phi(r) = -hhat'(r/pi) / (2 pi^3 sinh r)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.interpolate import make_interp_spline

from ._quad import composite_nodes, mapped_nodes, quad_tol

REAL = "real"
COMPLEX = "complex"

_CONV_NODES = 160
_INNER_NODES = 128
_OUTER_NODES = 160
_SIGMA_FLOOR = 0.25


class PositivityError(RuntimeError):
    """No dilation in (0, 1] makes h and h(i.) positive on [-1/2, 1/2]."""


def place_epsilon(kind: str) -> int:
    """0 for a real place, 1 for a complex place."""
    if kind == REAL:
        return 0
    if kind == COMPLEX:
        return 1
    raise ValueError(f"unknown place kind {kind!r}")


def _bump(x, b, deriv=0):
    """g0 and its first two derivatives, vanishing outside (-b, b)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < b
    y = x[inside] / b
    one = 1.0 - y * y
    g = np.exp(-1.0 / one)
    if deriv == 0:
        out[inside] = g
    elif deriv == 1:
        out[inside] = g * (-2.0 * y / one**2) / b
    elif deriv == 2:
        p = -2.0 * y / one**2
        dp = -2.0 / one**2 - 8.0 * y * y / one**3
        out[inside] = g * (p * p + dp) / b**2
    else:
        raise ValueError("only derivatives up to order 2 are available")
    return out


def _conv(x, b, deriv=0):
    """g1^(deriv)(x) = int g0(y) g0^(deriv)(x - y) dy by Gauss-Legendre."""
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.zeros_like(flat)
    inside = np.abs(flat) < 2 * b
    xi = flat[inside]
    lo = np.maximum(-b, xi - b)
    hi = np.minimum(b, xi + b)
    out_in = np.empty_like(xi)
    chunk = 4096
    for start in range(0, xi.size, chunk):
        sl = slice(start, start + chunk)
        y, w = mapped_nodes(lo[sl], hi[sl], _CONV_NODES)
        vals = _bump(y, b) * _bump(xi[sl, None] - y, b, deriv)
        out_in[sl] = np.sum(w * vals, axis=-1)
    out[inside] = out_in
    return out.reshape(x.shape)


@lru_cache(maxsize=16)
def _norm(b: float) -> float:
    return float(_conv(np.array([0.0]), b)[0])


@lru_cache(maxsize=32)
def _interpolants(b: float, delta: float, grid_size: int):
    """Quintic splines of hhat and hhat' on a uniform grid of [0, support]."""
    support = 2 * b * delta
    grid = np.linspace(0.0, support, grid_size)
    g1_0 = _norm(b)
    values = _conv(grid / delta, b) / g1_0
    slopes = _conv(grid / delta, b, deriv=1) / (delta * g1_0)
    return (
        make_interp_spline(grid, values, k=5),
        make_interp_spline(grid, slopes, k=5),
    )


@lru_cache(maxsize=64)
def _bump_nodes(b: float, panels: int):
    t, w = composite_nodes(0.0, b, panels)
    return t, w * _bump(t, b)


def _base_h(z, b, delta):
    """h(z) = delta * g0hat(delta z)^2 / g1(0), the transform of hhat(x) = g1(x / delta) / g1(0).

    g0hat(w) = 2 int_0^b g0(t) cos(2 pi w t) dt.  On the real axis h is a square,
    and on the imaginary axis cosh >= 1 termwise gives h(iy) >= h(0) exactly.
    """
    z = np.asarray(z)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    flat = z.ravel()
    # g0 even: h is real on the real and imaginary axes
    on_axes = not np.iscomplexobj(z) or bool(np.all((flat.imag == 0) | (flat.real == 0)))
    g = np.empty(flat.shape, dtype=float if on_axes else complex)
    need = np.maximum(16, np.ceil(np.abs(flat.real) * delta * b))
    levels = 2 ** np.ceil(np.log2(need)).astype(int)
    for panels in np.unique(levels):
        sel = levels == panels
        t, wg = _bump_nodes(b, int(panels))
        ws = delta * flat[sel]
        if on_axes:
            imag = ws.imag != 0 if np.iscomplexobj(ws) else np.zeros(ws.shape, dtype=bool)
            vals = np.empty(ws.shape)
            vals[~imag] = 2.0 * np.cos(2 * np.pi * np.outer(ws[~imag].real, t)) @ wg
            vals[imag] = 2.0 * np.cosh(2 * np.pi * np.outer(ws[imag].imag, t)) @ wg
            g[sel] = vals
        else:
            g[sel] = 2.0 * np.cos(2 * np.pi * np.outer(ws, t)) @ wg
    out = delta * g * g / _norm(b)
    if scalar:
        return out.reshape(())[()]
    return out.reshape(z.shape)


def _positivity_ok(b, delta, grid, margin):
    x = np.linspace(-0.5, 0.5, grid)
    h0 = _base_h(0.0, b, delta)
    real_min = np.min(_base_h(x, b, delta))
    imag_min = np.min(_base_h(1j * x, b, delta))
    return bool(real_min > margin * h0 and imag_min > margin * h0)


def find_positivity_scale(bump_support: float = 1.0, grid: int = 1001,
                          margin: float = 0.1, steps: int = 40) -> float:
    """Largest dilation in (0, 1] with h, h(i.) > margin * h(0) on [-1/2, 1/2].

    Uses the grid check at delta = 1 first and otherwise bisects.
    """
    b = float(bump_support)
    if not b > 0:
        raise ValueError("bump support must be positive")
    if _positivity_ok(b, 1.0, grid, margin):
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if _positivity_ok(b, mid, grid, margin):
            lo = mid
        else:
            hi = mid
    if lo == 0.0:
        raise PositivityError(f"no admissible dilation for bump support {b}")
    return lo


@dataclass(frozen=True)
class TestFunctionPair:
    """An admissible pair, optionally dilated by ``scale_pair``.

    ``hhat(x) = base_hhat(dilation * x)`` and ``h(z) = base_h(z / dilation) / dilation``.
    """

    bump_support: float = 1.0
    positivity_scale: float = 0.5
    dilation: float = 1.0
    grid_size: int = 4097

    __test__ = False

    @property
    def base_support(self) -> float:
        return 2 * self.bump_support * self.positivity_scale

    @property
    def support_radius(self) -> float:
        return self.base_support / self.dilation

    def hhat(self, x, deriv: int = 0, exact: bool = False):
        """hhat or its derivative (order <= 2).

        The default evaluates the quintic interpolant for orders 0 and 1;
        ``exact=True`` evaluates the convolution integral directly.
        """
        x = np.asarray(x, dtype=float)
        t = self.dilation
        u = np.abs(t * x)
        b, delta = self.bump_support, self.positivity_scale
        if deriv == 2 or exact:
            raw = _conv(t * x / delta, b, deriv) / (_norm(b) * delta**deriv)
            return raw * t**deriv
        if deriv not in (0, 1):
            raise ValueError("deriv must be 0, 1 or 2")
        spline = _interpolants(b, delta, self.grid_size)[deriv]
        inside = u <= self.base_support
        vals = np.where(inside, spline(np.minimum(u, self.base_support)), 0.0)
        if deriv == 1:
            vals = np.sign(x) * vals * t
        else:
            # the spline can undershoot by rounding where hhat is flat at 0
            vals = np.maximum(vals, 0.0)
        return vals

    def interpolant(self, deriv: int = 0):
        """The order-5 spline of hhat (deriv=0) or hhat' (deriv=1) in the base variable."""
        return _interpolants(self.bump_support, self.positivity_scale, self.grid_size)[deriv]

    def h(self, z):
        """h(z) for real or complex z."""
        t = self.dilation
        return _base_h(np.asarray(z) / t, self.bump_support, self.positivity_scale) / t

    def h_zero(self) -> float:
        return float(self.h(0.0))

    def h_tail_cutoff(self, rel: float = 1e-13) -> float:
        """A point beyond which |h| stays below ``rel * h(0)``."""
        h0 = self.h_zero()
        x = np.linspace(0.0, 200.0 * self.dilation / self.base_support, 4001)
        vals = np.abs(self.h(x))
        big = np.nonzero(vals > rel * h0)[0]
        return float(x[min(big[-1] + 1, x.size - 1)])


def make_test_pair(bump_support: float = 1.0, grid: int = 1001,
                   margin: float = 0.1, grid_size: int = 4097) -> TestFunctionPair:
    """Build the admissible pair from the bump and normalize its support to <= 1."""
    delta = find_positivity_scale(bump_support, grid, margin)
    delta = min(delta, 1.0 / (2.0 * bump_support))
    return TestFunctionPair(float(bump_support), float(delta), 1.0, grid_size)


def scale_pair(pair: TestFunctionPair, t: float) -> TestFunctionPair:
    """hhat_t(x) = hhat(t x), h_t(z) = h(z / t) / t; the support becomes support / t."""
    if not t > 0:
        raise ValueError("dilation must be positive")
    return replace(pair, dilation=pair.dilation * float(t))


def h_eval(pair: TestFunctionPair, z):
    """h(z) = int hhat(x) exp(-2 pi i z x) dx over [-support, support].

    ``z`` must be real or purely imaginary.
    """
    arr = np.asarray(z)
    if np.iscomplexobj(arr) and np.any((arr.real != 0) & (arr.imag != 0)):
        raise ValueError("h_eval takes real or purely imaginary arguments")
    return pair.h(z)


def support_cutoff(support_radius: float, kind: str) -> float:
    """Trace threshold 2 cosh(2 pi R / (1 + eps)); phi(g) = 0 once tr(g g*) reaches it."""
    eps = place_epsilon(kind)
    return 2.0 * math.cosh(2 * math.pi * support_radius / (1 + eps))


def phi_cutoff(pair: TestFunctionPair, kind: str) -> float:
    """Radius r beyond which phi vanishes: 2 pi R / (1 + eps)."""
    return 2 * math.pi * pair.support_radius / (1 + place_epsilon(kind))


def phi_eval(pair: TestFunctionPair, r, kind: str, exact: bool = False):
    """The spherical function phi(r), r = arccosh(tr(g g*) / 2), at a real or complex place."""
    eps = place_epsilon(kind)
    r = np.abs(np.asarray(r, dtype=float))
    scalar = r.ndim == 0
    r = np.atleast_1d(r)
    out = np.zeros_like(r)
    R = pair.support_radius
    if eps == 1:
        small = r < 1e-6
        big = ~small & (r < math.pi * R)
        out[big] = -pair.hhat(r[big] / np.pi, 1, exact) / (2 * np.pi**3 * np.sinh(r[big]))
        if np.any(small):
            second = float(pair.hhat(0.0, 2))
            out[small] = -second / (2 * np.pi**4)
    else:
        live = r < 2 * math.pi * R
        s = np.sinh(r[live] / 2)
        upper = np.sqrt(np.maximum(np.sinh(np.pi * R) ** 2 - s * s, 0.0))
        # u = sigma sinh(theta) resolves both the scale s near u = 0 and the
        # logarithmic growth of t(u) for large u.
        sigma = np.maximum(s, _SIGMA_FLOOR)[:, None]
        theta, w = mapped_nodes(np.zeros_like(upper), np.arcsinh(upper / sigma[:, 0]), _INNER_NODES)
        u = sigma * np.sinh(theta)
        w = w * sigma * np.cosh(theta)
        rho2 = u * u + (s * s)[:, None]
        t = np.arcsinh(np.sqrt(rho2)) / np.pi
        slope = pair.hhat(t, 1, exact)
        integrand = slope / (np.sqrt(rho2) * np.sqrt(1.0 + rho2))
        out[live] = -np.sum(w * integrand, axis=-1) / (4 * np.pi**3)
    return out[0] if scalar else out


def phi_to_hhat(phi: Callable, t, kind: str, r_max: float):
    """Forward transform: hhat from phi, with phi vanishing for r >= r_max.

    Real place: hhat(t) = 2 pi int_{2 pi |t|}^inf phi(r) sinh r / sqrt(sinh(r/2)^2 - sinh(pi t)^2) dr,
    computed after the change of variables v^2 = sinh(r/2)^2 - sinh(pi t)^2.
    Complex place: hhat(t) = 2 pi^2 int_{pi |t|}^inf phi(r) sinh r dr.
    """
    eps = place_epsilon(kind)
    t = np.abs(np.asarray(t, dtype=float))
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.zeros_like(t)
    if eps == 0:
        live = 2 * np.pi * t < r_max
        S = np.sinh(np.pi * t[live])
        upper = np.sqrt(np.maximum(np.sinh(r_max / 2) ** 2 - S * S, 0.0))
        sigma = np.maximum(S, _SIGMA_FLOOR)[:, None]
        theta, w = mapped_nodes(np.zeros_like(upper), np.arcsinh(upper / sigma[:, 0]), _OUTER_NODES)
        v = sigma * np.sinh(theta)
        w = w * sigma * np.cosh(theta)
        r = 2 * np.arcsinh(np.sqrt(v * v + (S * S)[:, None]))
        vals = np.asarray(phi(r.ravel())).reshape(r.shape)
        out[live] = 8 * np.pi * np.sum(w * vals, axis=-1)
    else:
        live = np.pi * t < r_max
        r, w = mapped_nodes(np.pi * t[live], np.full(np.count_nonzero(live), r_max), _OUTER_NODES)
        vals = np.asarray(phi(r.ravel())).reshape(r.shape)
        out[live] = 2 * np.pi**2 * np.sum(w * vals * np.sinh(r), axis=-1)
    return out[0] if scalar else out


def round_trip_error(pair: TestFunctionPair, kind: str, points: int = 200) -> float:
    """max |phi_to_hhat(phi_eval(pair)) - hhat| on a grid of [0, 1.2 support]."""
    grid = np.linspace(0.0, 1.2 * pair.support_radius, points)
    back = phi_to_hhat(lambda r: phi_eval(pair, r, kind), grid, kind, phi_cutoff(pair, kind))
    return float(np.max(np.abs(back - pair.hhat(grid))))


def tanh_identity_residual(x: float) -> float:
    """int_0^inf sin(2 pi x t) / sinh(pi t) dt - tanh(pi x) / 2."""
    def f(t):
        if t == 0.0:
            return 2.0 * x
        return math.sin(2 * math.pi * x * t) / math.sinh(math.pi * t)

    tol = min(quad_tol(), 1e-12)
    value, _ = integrate.quad(f, 0.0, 40.0, limit=2000, epsabs=tol, epsrel=tol)
    return value - math.tanh(math.pi * x) / 2


def substitution_identity_residual(t: float, x: float) -> float:
    """int_{2 pi t}^{2 pi x} sinh r dr / (sqrt(sinh^2(r/2) - sinh^2(pi t)) sqrt(sinh^2(pi x) - sinh^2(r/2))) - 2 pi."""
    if not 0 <= t < x:
        raise ValueError("need 0 <= t < x")
    a, b = 2 * math.pi * t, 2 * math.pi * x
    st, sx = math.sinh(math.pi * t) ** 2, math.sinh(math.pi * x) ** 2

    def smooth(r):
        w = math.sinh(r / 2) ** 2
        lower = (w - st) / (r - a) if r > a else math.sinh(a / 2) * math.cosh(a / 2)
        upper = (sx - w) / (b - r) if r < b else math.sinh(b / 2) * math.cosh(b / 2)
        prod = lower * upper
        return math.sinh(r) / math.sqrt(prod) if prod > 0 else 0.0

    tol = min(quad_tol(), 1e-12)
    value, _ = integrate.quad(smooth, a, b, weight="alg", wvar=(-0.5, -0.5),
                              epsabs=tol, epsrel=tol, limit=200)
    return value - 2 * math.pi


def identity_integral(pair: TestFunctionPair, kind: str) -> float:
    """phi(1) in terms of h: (1/4pi) int x h tanh(pi x) dx (real), (2/pi^2) int x^2 h dx (complex)."""
    eps = place_epsilon(kind)
    T = pair.h_tail_cutoff()
    panels = max(64, int(np.ceil(T * pair.base_support / pair.dilation)) * 4)
    x, w = composite_nodes(0.0, T, panels)
    hx = pair.h(x)
    if eps == 0:
        return float(2 * np.sum(w * x * hx * np.tanh(np.pi * x)) / (4 * np.pi))
    return float(2 * np.sum(w * x * x * hx) * 2 / np.pi**2)
