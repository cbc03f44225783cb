"""
Rational and quadratic number fields
====================================

Field descriptors, prime splitting, level ideals, units and the Dedekind
zeta constants that feed the parabolic and residual terms.
"""

from tracebound.numfield import (
    class_number,
    factor_ideal,
    fundamental_unit,
    make_field,
    places_above,
    unit_square_classes,
    zeta_tools,
)

for spec in ("Q", "quad:-1", "quad:-3", "quad:5", "quad:-23"):
    F = make_field(spec)
    Z = zeta_tools(F)
    print(f"{F.name:>10}: disc {F.discriminant:>4}, places {F.infinite_places}, "
          f"h = {class_number(F)}, lambda_-1 = {Z.residue:.6f}, lambda_0 = {Z.constant_term:.6f}")

# how rational primes split in Q(i)
F = make_field("quad:-1")
for p in (2, 3, 5, 13):
    kinds = [v.splitting for v in places_above(F, p)]
    print(f"p = {p:>2} in Q(i): {kinds}")

# the level ideal (12) over Q and its index
ideal = factor_ideal(make_field("Q"), 12)
print(f"(12): norm {ideal.norm}, index {ideal.index}, A_J = {ideal.A_J:.5f}")

# units of a real quadratic field
F = make_field("quad:94")
print(f"fundamental unit of Q(sqrt 94): {fundamental_unit(F)}")
print(f"unit square classes of Q(sqrt 5): {unit_square_classes(make_field('quad:5'))}")
