"""Dual numbers carry a first derivative along for free; jets carry more."""

import math

from dual_darboux import DualScalar, Jet, dual_sin
from dual_darboux.expr import evaluate, parse

x = DualScalar(0.7, 1.0)  # seed d/dx = 1
y = dual_sin(x) * x
print(f"f(x) = x sin x at 0.7: value {y.real:.12f}, derivative {y.dual:.12f}")
print(f"by hand:                value {0.7 * math.sin(0.7):.12f}, "
      f"derivative {math.sin(0.7) + 0.7 * math.cos(0.7):.12f}")

# a jet of order 3 gives the first three derivatives of a parsed expression
j = evaluate(parse("exp(0.5*u) * cos(u)"), Jet.variable(0.0, 3))
print("derivatives at 0:", [float(j.derivative(k)) for k in range(4)])
