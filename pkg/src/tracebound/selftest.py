"""Quick invariant checks run by ``trace-bound selftest``."""

from __future__ import annotations

import itertools
import math

import numpy as np

from . import local_orbital as lo
from .arch_orbital import arch_intertwining, arch_parabolic, identity_contribution
from .testfn import (
    COMPLEX,
    REAL,
    make_test_pair,
    phi_eval,
    round_trip_error,
    substitution_identity_residual,
    tanh_identity_residual,
)


def _transforms():
    pair = make_test_pair()
    out = []
    for kind in (REAL, COMPLEX):
        err = round_trip_error(pair, kind)
        out.append((f"round trip ({kind})", err <= 1e-6, f"max error {err:.2e}"))
    tanh = max(abs(tanh_identity_residual(x)) for x in (0.1, 0.5, 1.3))
    out.append(("tanh integral", tanh <= 1e-6, f"max residual {tanh:.2e}"))
    sub = max(abs(substitution_identity_residual(t, x)) for t, x in ((0.0, 0.4), (0.2, 0.7), (0.5, 1.5)))
    out.append(("2 pi substitution", sub <= 1e-6, f"max residual {sub:.2e}"))
    return out


def _local():
    bad = 0
    for p in (2, 3, 5, 7):
        for m, u, alpha in itertools.product(range(p), range(p), range(1, 5)):
            if lo.discriminant_valuation(p, m, u) == 0:
                bad += lo.count_congruence_roots(p, alpha, m, u) != lo.count_congruence_roots(p, 1, m, u)
    out = [("root-count stabilization", bad == 0, f"{bad} violations")]
    worst = max(float(lo.parabolic_g(q, e, 1.0)) * q ** (e / 2) for q in (2, 3, 5, 7) for e in range(7))
    out.append(("g(1) <= q^(-e/2)", worst <= 1 + 1e-12, f"max g(1) q^(e/2) = {worst:.4f}"))
    return out


def _arch():
    pair = make_test_pair()
    z_real = arch_parabolic(pair, REAL)
    z_cplx = arch_parabolic(pair, COMPLEX)
    out = [
        ("Z(1) real", math.isclose(z_real, 1 / (4 * math.pi), rel_tol=1e-12), f"{z_real!r}"),
        ("Z(1) complex", math.isclose(z_cplx, 1 / math.pi**2, rel_tol=1e-12), f"{z_cplx!r}"),
    ]
    for kind in (REAL, COMPLEX):
        val = complex(arch_intertwining(kind, 0.5))
        out.append((f"intertwining at 1/2 ({kind})", abs(val - math.pi) <= 1e-10, f"{val.real!r}"))
    diff = abs(identity_contribution(pair, REAL) - float(phi_eval(pair, 0.0, REAL)))
    out.append(("identity term vs phi(0)", diff <= 1e-6, f"difference {diff:.2e}"))
    h = pair.h(np.linspace(-5, 5, 201))
    out.append(("h >= 0", bool(np.all(h >= 0)), f"min {float(np.min(h)):.3e}"))
    return out


SUITES = {"transforms": _transforms, "local": _local, "arch": _arch}


def run(suite: str = "all") -> list[tuple[str, bool, str]]:
    names = list(SUITES) if suite == "all" else [suite]
    results = []
    for name in names:
        results.extend(SUITES[name]())
    return results
