"""
The bound report for one level
==============================

Assemble every term for a prime level over Q and over Q(i), in both
modes, and read off the normalized total and the scaling ratio.
"""

from tracebound.assembler import TERMS, Config, assemble

for field, n in (("Q", 1009), ("quad:-1", 13)):
    for mode in ("rigorous", "numeric"):
        r = assemble(field, n, Config(mode=mode, a=(1.0,)))
        print(f"{field} level {n} ({mode}), A = {r.A}, index {r.index}, {r.n_elliptic} elliptic classes")
        for k in TERMS:
            print(f"    {k:>6} = {r.terms[k]: .4e}")
        print(f"    total {r.total:.4e}, ratio {r.ratio:.4e}, flags {r.flags}")

# the theorem's choice of a is far above 1 at this size
r = assemble("Q", 1009)
print(f"auto a: theorem value {r.a_theorem:.2f}, evaluated at {r.a}; flags {r.flags}")
