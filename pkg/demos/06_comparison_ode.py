"""Blow-up through a comparison ODE.

Along the diagonal t = x + R the solution dominates a scalar ODE
W' = c |W|^p / (1 + x)^(1 + a) with W(R) = G eps. The ODE has a closed-form
blow-up point, which the adaptive RK4 integrator confirms.
"""

from wavelife.blowup import G_from_data, blowup_time_closed, comparison_check, ode_integrate
from wavelife.model import ProblemSpec, build_grid, default_bump
from wavelife.picard import march_solve

print("G for the default bump:", G_from_data(default_bump(1.0)), "= 128/315")
print("closed form, p=2 a=-1 Geps=0.1:", blowup_time_closed(2, -1, 1, 0.1))
print("closed form, p=2 a=0  Geps=0.5:", blowup_time_closed(2, 0, 1, 0.5))
print("RK4, p=2 a=-1 Geps=0.1:", ode_integrate(2, -1, 1, 0.1).blowup_x)
print("p=2 a=2 Geps=1e-3 (global):", blowup_time_closed(2, 2, 1, 1e-3))

spec = ProblemSpec(p=2, a=-1, epsilon=0.3)
U, tb = march_solve(spec, build_grid(20.0, 1.0, 0.02))
for c in (1e-3, 1.0, 1e3):
    rep = comparison_check(spec, U, c)
    print(f"c={c:g}: V > W everywhere: {rep.passed}, first violation {rep.first_violation}")
print("solver blow-up time", tb)
