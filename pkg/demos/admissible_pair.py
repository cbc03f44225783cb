"""
The admissible test-function pair
=================================

Build the pair (h, hhat) from a smooth bump, check the positivity
conditions, and walk the Abel transform there and back.
"""

import numpy as np

from tracebound.testfn import (
    COMPLEX,
    REAL,
    make_test_pair,
    phi_eval,
    round_trip_error,
    scale_pair,
)

# hhat(x) = g1(x / delta) / g1(0) with g1 the self-convolution of the bump
pair = make_test_pair()
print(f"positivity scale delta = {pair.positivity_scale}")
print(f"support radius R = {pair.support_radius}")
print(f"hhat(0) = {float(pair.hhat(0.0)):.6f}, h(0) = {pair.h_zero():.16f}")

# h is nonnegative on R and grows along the imaginary axis
x = np.linspace(-20, 20, 2001)
y = np.linspace(0, 0.5, 51)
print(f"min h on [-20, 20]: {pair.h(x).min():.3e}")
print(f"h(i/2) / h(0) = {float(pair.h(0.5j)) / pair.h_zero():.4f}")

# phi on the group, and back to hhat
for kind in (REAL, COMPLEX):
    r = np.array([0.0, 1.0, 3.0, 6.0])
    print(f"{kind:>7}: phi(r) = {np.array2string(phi_eval(pair, r, kind), precision=4)}")
    print(f"{kind:>7}: round-trip error {round_trip_error(pair, kind):.2e}")

# dilation moves mass outward in x and shrinks the support of hhat
for a in (1.0, 0.5, 0.3):
    p = scale_pair(pair, a)
    print(f"a = {a}: support {p.support_radius:.3f}, h_a(0) = {p.h_zero():.4f}")
