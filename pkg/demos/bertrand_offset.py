"""Build Bertrand offsets of a skew surface and check the closed forms."""

import math

from dual_darboux import (OffsetSpec, RuledSurface, developable_offset_distance, full_report,
                          invariant_relations, make_offset)

base = RuledSurface.from_expressions(
    "[0.4*cos(3*u), u + 0.2*sin(u), 0.3*u^2]", "[cos(u), sin(u), 1.2 + 0.3*sin(2*u)]", (0, 3))

spec = OffsetSpec(math.radians(30), 0.3)
off = make_offset(base, spec)
s = base.sample_s(4)
pred = invariant_relations(base.frame_at(s), spec)
meas = off.matched_state(s)
for k in ("gamma1", "delta1", "Delta1"):
    print(f"{k:7} predicted {getattr(pred, k)}")
    print(f"{'':7} measured  {getattr(meas, k[:-1])}")

print()
print(full_report(base, spec, 30).summary())

# a developable base keeps a developable offset for the right distance
tangent = RuledSurface.from_expressions("[cos(u), sin(u), 0.5*u]", "[-sin(u), cos(u), 0.5]", (0, 6))

ts = developable_offset_distance(tangent.frame_at(1.0), math.pi / 3)
dev = make_offset(tangent, OffsetSpec(math.pi / 3, ts))
print(f"\ntangent developable, theta* = {ts:.6f}: offset Delta1 = {dev.matched_state(1.0).Delta:.2e}")
