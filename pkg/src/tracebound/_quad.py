"""Small quadrature helpers shared by the transform and orbital modules."""

from __future__ import annotations

import os
from functools import lru_cache

import numpy as np

DEFAULT_TOL = 1e-10


def quad_tol() -> float:
    """Absolute tolerance for adaptive quadrature, overridable by TRACE_BOUND_TOL."""
    raw = os.environ.get("TRACE_BOUND_TOL")
    if raw is None:
        return DEFAULT_TOL
    value = float(raw)
    if not value > 0:
        raise ValueError("TRACE_BOUND_TOL must be positive")
    return value


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def mapped_nodes(lo, hi, n: int):
    """Nodes and weights of an n-point rule on [lo, hi], broadcast over array endpoints.

    Returns arrays of shape lo.shape + (n,).
    """
    x, w = gauss_legendre(n)
    lo = np.asarray(lo, dtype=float)[..., None]
    hi = np.asarray(hi, dtype=float)[..., None]
    half = 0.5 * (hi - lo)
    return half * x + (hi + lo) * 0.5, half * w


@lru_cache(maxsize=None)
def composite_nodes(lo: float, hi: float, panels: int, order: int = 20):
    """Composite Gauss-Legendre rule with equal panels on [lo, hi]."""
    edges = np.linspace(lo, hi, panels + 1)
    nodes, weights = mapped_nodes(edges[:-1], edges[1:], order)
    nodes = nodes.ravel()
    weights = weights.ravel()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights
