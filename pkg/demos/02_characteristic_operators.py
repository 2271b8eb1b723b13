"""Integral operators along characteristics.

The nonlinear problem is recast as a fixed point U = eps u0_t + L'(|U|^p)
for U = u_t. L' adds up the source along the two backward characteristics
through (x, t). On the CFL-1 mesh both lines pass through nodes, so a
trapezoid sum is exact for constants and second order for smooth input.
"""

import numpy as np
from scipy.integrate import quad

from wavelife.duhamel import Lp_field, apply_L, apply_Lp, weight
from wavelife.model import Field, build_grid

grid = build_grid(2.0, 1.0, 0.02)
ones = Field(grid, np.ones((grid.nt + 1, grid.width)))

# with a = -1 the weight is 1, and L'(1) = t exactly
print("L'(1) at t=2, a=-1:", apply_Lp(-1.0, ones, 0.0, 2.0))
# L(1) = t^2 / 2
print("L(1)  at t=2, a=-1:", apply_L(-1.0, ones, 0.0, 2.0))

# with a = 0 the weight decays like 1/|x|; compare with adaptive quadrature
ref = quad(lambda s: (1 + (2 - s) ** 2) ** -0.5, 0, 2)[0]
for h in (0.04, 0.02, 0.01):
    g = build_grid(2.0, 1.0, h)
    v = Field(g, np.ones((g.nt + 1, g.width)))
    print(f"h={h}: error {abs(apply_Lp(0.0, v, 0.0, 2.0) - ref):.2e}")

# the whole field at once, via running sums along each characteristic
field = Lp_field(0.0, ones)
print("field shape", field.values.shape, " value at (0, 2):", field.at(0.0, 2.0))
print("weight(a=1, x=10) =", float(weight(1.0, 10.0)))
