"""Free wave: the linear solution the nonlinear problem starts from.

With f = 0 the solution of u_tt = u_xx is half the integral of g over
[x - t, x + t]. Its time derivative splits into two half-height copies of g
running apart at unit speed, and once they separate u itself settles into a
flat plateau of height total_g / 2 that widens with the cone.
"""

import numpy as np

from wavelife import dalembert
from wavelife.model import ProblemSpec

spec = ProblemSpec(p=2, a=0, epsilon=1.0)
print("total_g =", spec.data.total_g, " (256/315 =", 256 / 315, ")")

x = np.linspace(-6, 6, 13)
for t in (0.0, 1.0, 4.0):
    print(f"t={t}: u0 ", np.round(dalembert.u0(spec, x, t), 4))
    print(f"      u0_t", np.round(dalembert.u0_t(spec, x, t), 4))

# the values vanish outside |x| <= t + R
t = 4.0
outside = np.abs(x) > t + spec.R
print("max |u0| outside the cone:", np.max(np.abs(dalembert.u0(spec, x[outside], t))))

# u0 solves the wave equation: u_tt - u_xx = 0 pointwise
xx = np.linspace(-3, 3, 61)
print("max |u_tt - u_xx| =", np.max(np.abs(dalembert.u0_tt(spec, xx, 1.3) - dalembert.u0_xx(spec, xx, 1.3))))
