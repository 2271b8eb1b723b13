"""Lifespan as a function of the data size.

For a < 0 the lifespan grows like eps^(-(p-1)/(-a)), and for a = 0 it grows
like exp(C eps^(-(p-1))). A short sweep and a log-log fit show the power law.
The a = 0 law needs far longer horizons and is covered by the acceptance
suite.
"""

from wavelife.lifespan import fit_power_law, measure_lifespan, sweep
from wavelife.model import ProblemSpec

base = ProblemSpec(p=2, a=-1, epsilon=1.0)
table = sweep(base, [0.5, 0.4, 0.3, 0.25, 0.2], h=0.02, T_max=100)
print(table.to_csv())
fit = fit_power_law(table, p=2, a=-1)
print(f"slope {fit.slope:.4f} (target {fit.target}), residual {fit.residual:.3f}")

# a > 0 and small data: no blow-up on the horizon
print(measure_lifespan(ProblemSpec(p=2, a=1, epsilon=0.05), h=0.1, T_max=50))
