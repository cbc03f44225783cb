"""
Finite-place orbital integrals
==============================

Root counts of t^2 - m t + u modulo prime powers, the elliptic local
factor against its bound, and the parabolic factor g_v(s).
"""

from tracebound import local_orbital as lo

# counts stabilize once alpha exceeds the discriminant valuation
p, m, u = 3, 1, 7
f = lo.discriminant_valuation(p, m, u)
counts = [lo.count_congruence_roots(p, alpha, m, u) for alpha in range(1, 7)]
print(f"p = {p}, (m, u) = ({m}, {u}), f = {f}: counts {counts}, bound {lo.root_count_bound(p, f):.2f}")

# exact local factor versus the bound as the level exponent grows
for e in range(4):
    exact = lo.elliptic_local(p, e, m, u, mode="exact_series")
    bound = lo.elliptic_local(p, e, m, u)
    print(f"e = {e}: exact {exact:.6f} <= bound {bound:.6f}")

# g_v(1) and g_v'(1) against q^(-e/2)
for q in (2, 3, 5):
    row = [float(lo.parabolic_g(q, e, 1.0)) * q ** (e / 2) for e in range(5)]
    print(f"q = {q}: g(1) q^(e/2) = {[round(x, 4) for x in row]}")

print(f"finite intertwining at q = 2, s = 1: {lo.finite_intertwining(2, 1.0):.6f}")
