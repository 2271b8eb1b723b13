"""An independent check: leapfrog finite differences.

The leapfrog scheme discretizes u_tt - u_xx directly and knows nothing about
characteristics. Its u_t should match the marcher to first order in h, and
both should see blow-up at nearly the same time.
"""

from wavelife.fdm import compare_solvers
from wavelife.model import ProblemSpec, build_grid

spec = ProblemSpec(p=2, a=0, epsilon=0.05)
for h in (0.02, 0.01, 0.005):
    rep = compare_solvers(spec, build_grid(1.0, 1.0, h))
    print(f"h={h}: sup|u_t diff| = {rep.ut_diff:.3e}, sup|u diff| = {rep.u_diff:.3e}")

rep = compare_solvers(ProblemSpec(p=2, a=-1, epsilon=0.5), build_grid(10.0, 1.0, 0.01))
print(f"near blow-up: march {rep.march_blowup}, leapfrog {rep.fdm_blowup}, "
      f"gap {rep.blowup_rel_gap:.4f}, outcome {rep.outcome}")
