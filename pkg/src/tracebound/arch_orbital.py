"""Archimedean orbital integrals and the continuous-spectrum terms.

Each function takes a :class:`~tracebound.testfn.TestFunctionPair` for one
infinite place together with the place kind (``"real"`` or ``"complex"``).
``eps`` is 0 at a real place and 1 at a complex place.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import integrate, special

from ._quad import composite_nodes, mapped_nodes, quad_tol
from .numfield import IdealFactorization, ZetaData
from .testfn import (
    COMPLEX,
    REAL,
    TestFunctionPair,
    identity_integral,
    phi_cutoff,
    phi_eval,
    place_epsilon,
    scale_pair,
)


def identity_contribution(pair: TestFunctionPair, kind: str) -> float:
    """phi(1) = (1+eps) / ((2-eps)^(2(1-eps)) pi^(1+eps)) int x^(1+eps) h(x) tanh(pi x)^(1-eps) dx."""
    return identity_integral(pair, kind)


def _hhat_integral(pair, lo, func, nodes=96):
    """int_lo^R hhat(t) func(t) dt by Gauss-Legendre (zero when lo >= R)."""
    R = pair.support_radius
    if lo >= R:
        return 0.0
    t, w = mapped_nodes(lo, R, nodes)
    return float(np.sum(w * pair.hhat(t) * func(t)))


# elliptic -------------------------------------------------------------------

def elliptic_alpha(m, u, kind: str):
    """alpha = (m + sqrt D) / (m - sqrt D), D = m^2 - 4u, at a split place."""
    D = m * m - 4 * u
    if kind == REAL:
        if D <= 0:
            raise ValueError("real place is non-split for D <= 0")
        root = math.sqrt(D)
    else:
        root = cmath.sqrt(complex(D))
    num, den = m + root, m - root
    if abs(den) < abs(num):
        return num / den
    return den / num


def arch_elliptic(pair: TestFunctionPair, kind: str, m, u, mode: str = "exact") -> float:
    """Archimedean elliptic orbital integral for the class of t^2 - m t + u.

    ``m, u`` are the images under this place.  A real place is split when
    m^2 - 4u > 0; a complex place is always split.  Classes with negative
    eigenvalue ratio at a real place give 0, because the test function is
    supported in GL2^+(R).
    """
    if mode not in ("exact", "bound"):
        raise ValueError(f"unknown mode {mode!r}")
    eps = place_epsilon(kind)
    if kind == REAL:
        m, u = float(np.real(m)), float(np.real(u))
    else:
        m, u = complex(m), complex(u)
    D = m * m - 4 * u
    if D == 0:
        raise ValueError("zero discriminant: not an elliptic class")
    if kind == REAL and D < 0:
        c = (4 * u - m * m) / (4 * u)
        if mode == "bound":
            return abs(u / (4 * u - m * m)) * pair.h_zero() / math.sqrt(2)
        value = _hhat_integral(
            pair, 0.0,
            lambda x: np.cosh(np.pi * x) / (np.sinh(np.pi * x) ** 2 + c),
            nodes=160,
        )
        return 2 * value / (4 * math.sqrt(2))
    alpha = elliptic_alpha(m, u, kind)
    if kind == REAL and alpha <= 0:
        return 0.0
    if mode == "bound":
        return (1 + eps) / (2 * math.pi) * abs(u / D) ** ((1 + eps) / 2)
    if kind == REAL:
        return math.sqrt(alpha) / (2 * math.pi * abs(alpha - 1)) * float(
            pair.hhat(math.log(alpha) / (2 * math.pi)))
    a = abs(alpha)
    return a / (math.pi * abs(alpha - 1) ** 2) * float(pair.hhat(math.log(a) / math.pi))


# hyperbolic -----------------------------------------------------------------

def arch_hyperbolic(pair: TestFunctionPair, kind: str, alpha, weighted: bool = False,
                    mode: str = "bound") -> float:
    """Archimedean hyperbolic orbital integral for diag(alpha, 1), alpha != 1.

    Unweighted: bound (1+eps) |alpha|^((1+eps)/2) / (2 pi |alpha-1|^(1+eps)); the
    exact value carries the extra factor hhat(2 log|alpha| / (2 pi (1+eps))).
    Weighted (log of the height function inserted): the real bound
    2|alpha|/|alpha-1|^2 int_{|log alpha|/2pi} hhat(t) cosh(pi t) dt, and at a
    complex place the signed value
    -2|alpha|/|alpha-1|^2 int_{|log|alpha||/pi} hhat(t) sinh(pi t)/(cosh(pi t) - Re alpha/|alpha|) dt.
    Callers bounding the trace use the absolute value.
    """
    if mode not in ("exact", "bound"):
        raise ValueError(f"unknown mode {mode!r}")
    eps = place_epsilon(kind)
    if kind == REAL:
        alpha = float(np.real(alpha))
        if alpha <= 0:
            return 0.0
    else:
        alpha = complex(alpha)
    if alpha == 1:
        raise ValueError("alpha = 1 is not hyperbolic")
    a = abs(alpha)
    gap = abs(alpha - 1)
    if not weighted:
        if mode == "bound":
            return (1 + eps) * a ** ((1 + eps) / 2) / (2 * math.pi * gap ** (1 + eps))
        if kind == REAL:
            return math.sqrt(a) / (2 * math.pi * gap) * float(pair.hhat(math.log(a) / (2 * math.pi)))
        return a / (math.pi * gap**2) * float(pair.hhat(math.log(a) / math.pi))
    if kind == REAL:
        lo = abs(math.log(a)) / (2 * math.pi)
        if mode == "bound":
            return 2 * a / gap**2 * _hhat_integral(pair, lo, lambda t: np.cosh(np.pi * t))
        k = 4 * a / gap**2
        s0 = math.sinh(math.log(a) / 2) ** 2

        def f(t):
            sh = np.sinh(np.pi * t)
            X = 1 + k * np.maximum(sh * sh - s0, 0.0)
            rX = np.sqrt(X)
            return np.pi * k * sh * np.cosh(np.pi * t) / ((1 + rX) * rX)

        return -math.sqrt(a) / (math.pi * gap) * _hhat_integral(pair, lo, f)
    lo = abs(math.log(a)) / math.pi
    cos_arg = alpha.real / a
    value = _hhat_integral(pair, lo, lambda t: np.sinh(np.pi * t) / (np.cosh(np.pi * t) - cos_arg))
    return -2 * a / gap**2 * value


# parabolic ------------------------------------------------------------------

def parabolic_value(pair: TestFunctionPair, kind: str) -> float:
    """Z_v(1, phi) = hhat(0) (1+eps)^2 / (4 pi^(1+eps)): 1/(4pi) real, 1/pi^2 complex."""
    eps = place_epsilon(kind)
    return float(pair.hhat(0.0)) * (1 + eps) ** 2 / (4 * math.pi ** (1 + eps))


def parabolic_zeta_direct(pair: TestFunctionPair, kind: str, derivative: bool = False) -> float:
    """Z_v(1) or Z_v'(1) from the defining integral over the unipotent orbit.

    With y = 2 sinh(r/2) the orbit integral becomes
    real:    Z(s) = int_0^inf phi(r) cosh(r/2) (2 sinh(r/2))^(s-1) dr,
    complex: Z(s) = 2 int_0^inf phi(r) sinh(r) (2 sinh(r/2))^(2s-2) dr.
    """
    eps = place_epsilon(kind)
    top = phi_cutoff(pair, kind)

    def weight(r):
        y = 2 * math.sinh(r / 2)
        if eps == 0:
            base = math.cosh(r / 2)
            return base * math.log(y) if derivative else base
        base = 2 * math.sinh(r)
        return base * 2 * math.log(y) if derivative else base

    def f(r):
        if r == 0.0:
            return 0.0
        return float(phi_eval(pair, r, kind)) * weight(r)

    tol = min(quad_tol(), 1e-11)
    value, _ = integrate.quad(f, 0.0, top, limit=400, epsabs=tol, epsrel=tol)
    return value


def _digamma_weight_integral(pair: TestFunctionPair, kind: str) -> float:
    """int_R h(t) Re psi(1 + (1+eps) i t) dt."""
    eps = place_epsilon(kind)
    T = pair.h_tail_cutoff()
    panels = max(64, int(np.ceil(T * pair.base_support / pair.dilation)) * 4)
    t, w = composite_nodes(0.0, T, panels)
    psi = np.real(special.digamma(1 + (1 + eps) * 1j * t))
    return float(2 * np.sum(w * pair.h(t) * psi))


@dataclass(frozen=True)
class ParabolicConstants:
    """Z_v'(1, phi) = C1 + C2 h(0) + C3 int h(t) Re psi(1 + (1+eps) i t) dt."""

    kind: str
    c1: float
    c2: float
    c3: float
    provenance: str

    def evaluate(self, pair: TestFunctionPair) -> float:
        return self.c1 + self.c2 * pair.h_zero() + self.c3 * _digamma_weight_integral(pair, self.kind)


FIT_DILATIONS = (1.0, 0.6, 0.35)


@lru_cache(maxsize=8)
def parabolic_constants(kind: str, base: TestFunctionPair | None = None) -> ParabolicConstants:
    """Fit C1, C2, C3 by matching the defining integral on three dilated pairs."""
    from .testfn import make_test_pair

    if base is None:
        base = make_test_pair()
    rows, rhs = [], []
    for a in FIT_DILATIONS:
        pair = scale_pair(base, a)
        rows.append([1.0, pair.h_zero(), _digamma_weight_integral(pair, kind)])
        rhs.append(parabolic_zeta_direct(pair, kind, derivative=True))
    c1, c2, c3 = np.linalg.solve(np.array(rows), np.array(rhs))
    return ParabolicConstants(
        kind, float(c1), float(c2), float(c3),
        f"fitted to the defining integral at dilations {FIT_DILATIONS}",
    )


# |Re psi(1 + i y)| <= PSI_A + PSI_B y for y >= 0, checked in the tests.
PSI_A = 1.0
PSI_B = 1.0


def arch_parabolic(pair: TestFunctionPair, kind: str, derivative: bool = False,
                   constants: ParabolicConstants | None = None) -> float:
    """Z_v(1, phi) or Z_v'(1, phi) in the three-constant form."""
    if not derivative:
        return parabolic_value(pair, kind)
    if constants is None:
        constants = parabolic_constants(kind)
    return constants.evaluate(pair)


def parabolic_derivative_majorant(pair: TestFunctionPair, kind: str,
                                  constants: ParabolicConstants | None = None) -> float:
    """C(1) + C(2) h(0) >= |Z_v'(1, phi)| from the linear digamma majorant."""
    eps = place_epsilon(kind)
    if constants is None:
        constants = parabolic_constants(kind)
    T = pair.h_tail_cutoff()
    panels = max(64, int(np.ceil(T * pair.base_support / pair.dilation)) * 4)
    t, w = composite_nodes(0.0, T, panels)
    first_moment = float(np.sum(w * t * np.abs(pair.h(t))))
    mass = float(2 * np.sum(w * np.abs(pair.h(t))))
    psi_part = PSI_A * mass + 2 * PSI_B * (1 + eps) * first_moment
    return abs(constants.c1) + abs(constants.c2) * pair.h_zero() + abs(constants.c3) * psi_part


# intertwining and continuous spectrum ------------------------------------------

def arch_intertwining(kind: str, s):
    """sqrt(pi) Gamma(s) / Gamma(s + 1/2) (real) or pi Gamma(2s) / Gamma(2s + 1) (complex)."""
    eps = place_epsilon(kind)
    s = np.asarray(s)
    if eps == 0:
        poles = np.isclose(s, np.round(np.real(s))) & (np.real(s) <= 0)
        if np.any(poles):
            raise ZeroDivisionError("Gamma(s) has a pole")
        val = math.sqrt(math.pi) * special.gamma(s) / special.gamma(s + 0.5)
    else:
        poles = np.isclose(2 * s, np.round(np.real(2 * s))) & (np.real(s) <= 0)
        if np.any(poles):
            raise ZeroDivisionError("Gamma(2s) has a pole")
        val = math.pi * special.gamma(2 * s) / special.gamma(2 * s + 1)
    return val[()] if np.ndim(val) == 0 else val


def _product_h(pairs, t):
    out = np.ones_like(np.asarray(t, dtype=float))
    for pair in pairs:
        out = out * pair.h(t)
    return out


def _spectral_nodes(pairs):
    T = min(p.h_tail_cutoff() for p in pairs)
    freq = max(p.base_support / p.dilation for p in pairs)
    panels = max(64, int(np.ceil(T * freq)) * 4)
    return composite_nodes(0.0, T, panels)


@lru_cache(maxsize=32)
def eisenstein_majorant(zeta: ZetaData, t_max: float = 50.0, headroom: float = 1.05) -> tuple[float, float]:
    """C1, C2 with |Lambda'/Lambda(2it) - Lambda'/Lambda(1+2it)| <= C1 + C2 |t| on [0, t_max]."""
    t = np.linspace(1e-6, t_max, 5001)
    k = np.abs(zeta.eisenstein_kernel(t))
    c1 = float(k[0])
    c2 = float(np.max((k[1:] - c1) / t[1:]))
    c2 = max(c2, 0.0)
    return headroom * c1, headroom * c2


def eisenstein_term(zeta: ZetaData, pairs: Sequence[TestFunctionPair], ideal: IdealFactorization,
                    dim: float, mode: str = "numeric") -> float:
    """S_Eis = A_J / (2^(r1+2) pi) int (Lambda'/Lambda(2it) - Lambda'/Lambda(2it+1)) prod h(t) dim dt.

    ``dim`` is an upper bound for the dimension of fixed vectors.  The numeric
    mode integrates the kernel; the bound mode replaces it by C1 + C2 |t|.
    """
    F = zeta.field
    pre = ideal.A_J / (2 ** (F.r1 + 2) * math.pi) * dim
    t, w = _spectral_nodes(pairs)
    prod = _product_h(pairs, t)
    if mode == "numeric":
        kernel = zeta.eisenstein_kernel(t)
        return float(pre * 2 * np.sum(w * kernel * prod))
    if mode == "bound":
        c1, c2 = eisenstein_majorant(zeta)
        return float(pre * 2 * np.sum(w * (c1 + c2 * t) * np.abs(prod)))
    raise ValueError(f"unknown mode {mode!r}")


def residual_term(zeta: ZetaData, pairs: Sequence[TestFunctionPair], ideal: IdealFactorization,
                  dim: float) -> float:
    """S_Res = -2^(-r1-r2-2) sqrt|Delta| lim_{s->0} Lambda(2s)/Lambda(2s+1) A_J prod h(0) dim."""
    F = zeta.field
    prod = 1.0
    for pair in pairs:
        prod *= pair.h_zero()
    return (-(2.0 ** (-F.r1 - F.r2 - 2)) * math.sqrt(abs(F.discriminant))
            * zeta.ratio_limit * ideal.A_J * prod * dim)


def one_dim_term(pairs: Sequence[TestFunctionPair], ideal: IdealFactorization,
                 mode: str = "exact") -> float:
    """S_one = A_J prod h(i/2), or the bound A_J prod exp(pi/a_v) h_v(0)."""
    prod = 1.0
    for pair in pairs:
        if mode == "exact":
            prod *= float(np.real(pair.h(0.5j)))
        elif mode == "bound":
            prod *= math.exp(math.pi * pair.support_radius) * pair.h_zero()
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return ideal.A_J * prod
