"""Invariants of a few ruled surfaces along their striction curves."""

import numpy as np

from dual_darboux import RuledSurface

surfaces = {
    "cone": ("[0, 0, 0]", "[sin(pi/4)*cos(u), sin(pi/4)*sin(u), cos(pi/4)]", (0, 2 * np.pi)),
    "helicoid": ("[0, 0, 0.5*u]", "[cos(u), sin(u), 0]", (0, 2 * np.pi)),
    "skew": ("[0.4*cos(3*u), u + 0.2*sin(u), 0.3*u^2]", "[cos(u), sin(u), 1.2 + 0.3*sin(2*u)]", (0, 3)),
}

for name, (c, e, dom) in surfaces.items():
    surf = RuledSurface.from_expressions(c, e, dom)
    st = surf.frame_at(surf.sample_s(5))
    print(f"{name}: length of indicatrix {surf.length:.6f}, developable {surf.is_developable()[0]}")
    for s, g, d, D, rho in zip(st.s, st.gamma, st.delta, st.Delta, st.rho_bar.real):
        print(f"  s={s:7.4f}  gamma={g:+.5f}  delta={d:+.5f}  Delta={D:+.5f}  rho={rho:.5f}")
