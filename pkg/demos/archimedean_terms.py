"""
Archimedean orbital integrals and the continuous spectrum
=========================================================

Identity, elliptic and hyperbolic integrals at a real and a complex
place, the parabolic constants, and the Eisenstein and residual terms.
"""

import math

from tracebound import arch_orbital as ao
from tracebound.numfield import factor_ideal, make_field, zeta_tools
from tracebound.testfn import COMPLEX, REAL, make_test_pair

pair = make_test_pair()
for kind in (REAL, COMPLEX):
    print(f"{kind:>7}: identity {ao.identity_contribution(pair, kind):.6e}, "
          f"Z(1) = {ao.arch_parabolic(pair, kind):.6f}, "
          f"Z'(1) = {ao.arch_parabolic(pair, kind, derivative=True):.6f}")

# a non-split and a split class at the real place
for m, u in ((0.0, 1.0), (1.0, 1.0), (3.0, 1.0)):
    print(f"(m, u) = ({m}, {u}): exact {ao.arch_elliptic(pair, REAL, m, u):.6f}, "
          f"bound {ao.arch_elliptic(pair, REAL, m, u, mode='bound'):.6f}")

# weighted hyperbolic integral at a complex place
print(f"weighted J at alpha = -1: {ao.arch_hyperbolic(pair, COMPLEX, -1.0, weighted=True):.6f}")

c = ao.parabolic_constants(REAL)
print(f"fitted real constants: {c.c1:.6f}, {c.c2:.6f}, {c.c3:.6f}")
print(f"  compare -(gamma + log 2)/4pi = {-(0.5772156649015329 + math.log(2)) / (4 * math.pi):.6f}, "
      f"1/8, -1/4pi = {-1 / (4 * math.pi):.6f}")

Z = zeta_tools(make_field("Q"))
ideal = factor_ideal(Z.field, 11)
print(f"S_Eis numeric {ao.eisenstein_term(Z, [pair], ideal, 4):.4e}, "
      f"bound {ao.eisenstein_term(Z, [pair], ideal, 4, mode='bound'):.4e}")
print(f"S_Res {ao.residual_term(Z, [pair], ideal, 4):.4e}, S_one {ao.one_dim_term([pair], ideal):.4e}")
