"""Explicit leapfrog solver of ``u_tt - u_xx = |u_t|^p w(x)``, kept independent
of the integral-equation solvers so it can cross-check them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import dalembert
from .duhamel import weight
from .model import CharGrid, Field, ProblemSpec
from .picard import DEFAULT_THRESHOLD, march_solve, reconstruct_w


def leapfrog_solve(
    spec: ProblemSpec,
    grid: CharGrid,
    blowup_threshold: float = DEFAULT_THRESHOLD,
    nonlinear: bool = True,
) -> tuple[Field, Field, Optional[float]]:
    """Three-level scheme at CFL 1 with a backward-difference ``u_t`` in the source.

    Returns ``(u, u_t, blowup_time)``; ``u_t`` is recovered by centered
    differences. ``nonlinear=False`` switches the source off.
    """
    h, p, eps = grid.h, spec.p, spec.epsilon
    x = grid.x
    w = weight(spec.a, x) if nonlinear else np.zeros_like(x)
    rows = [eps * spec.data.f(x)]
    # first step: exact free solution plus the Taylor term of the source
    src0 = np.abs(eps * spec.data.g(x)) ** p * w
    rows.append(eps * dalembert.u0(spec, x, h) + 0.5 * h * h * src0)
    blowup_time = None
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, grid.nt):
            un, um = rows[n], rows[n - 1]
            nxt = -um.copy()
            nxt[1:] += un[:-1]
            nxt[:-1] += un[1:]
            dt = (un - um) / h
            nxt += h * h * np.abs(dt) ** p * w
            s = float(np.max(np.abs((nxt - un) / h)))
            if not np.isfinite(s) or s > blowup_threshold:
                blowup_time = (n + 1) * h
                break
            rows.append(nxt)
    if grid.nt == 0:
        rows = rows[:1]
    u = np.array(rows)
    ut = np.empty_like(u)
    ut[0] = eps * spec.data.g(x)
    if len(u) > 2:
        ut[1:-1] = (u[2:] - u[:-2]) / (2 * h)
        ut[-1] = (3 * u[-1] - 4 * u[-2] + u[-3]) / (2 * h)
    elif len(u) == 2:
        ut[1] = (u[1] - u[0]) / h
    return Field(grid, u, blowup_time=blowup_time), Field(grid, ut, blowup_time=blowup_time), blowup_time


@dataclass
class SolverComparison:
    u_diff: float
    ut_diff: float
    ut_diff_per_level: np.ndarray
    march_blowup: Optional[float]
    fdm_blowup: Optional[float]
    outcome: str  # "agree" | "blowup_mismatch"

    @property
    def blowup_rel_gap(self) -> Optional[float]:
        if self.march_blowup is None or self.fdm_blowup is None:
            return None
        return abs(self.march_blowup - self.fdm_blowup) / min(self.march_blowup, self.fdm_blowup)


def compare_solvers(
    spec: ProblemSpec,
    grid: CharGrid,
    blowup_threshold: float = DEFAULT_THRESHOLD,
    blowup_rtol: float = 0.05,
) -> SolverComparison:
    """Run ``march_solve`` and the leapfrog oracle and report their differences.

    Differences are taken over the levels both solvers completed. If only one
    blows up, or blow-up times differ by more than ``blowup_rtol``, the
    outcome is ``"blowup_mismatch"``.
    """
    U, tb_march = march_solve(spec, grid, blowup_threshold)
    u_fd, ut_fd, tb_fdm = leapfrog_solve(spec, grid, blowup_threshold)
    w = reconstruct_w(spec, U)
    # the last leapfrog u_t row uses a one-sided stencil; compare levels both finished
    n = min(U.values.shape[0], ut_fd.values.shape[0])
    per_level = np.max(np.abs(U.values[:n] - ut_fd.values[:n]), axis=1)
    u_diff = float(np.max(np.abs(w.values[:n] - u_fd.values[:n])))
    outcome = "agree"
    if (tb_march is None) != (tb_fdm is None):
        outcome = "blowup_mismatch"
    elif tb_march is not None and abs(tb_march - tb_fdm) > blowup_rtol * min(tb_march, tb_fdm):
        outcome = "blowup_mismatch"
    return SolverComparison(
        u_diff=u_diff,
        ut_diff=float(per_level.max()),
        ut_diff_per_level=per_level,
        march_blowup=tb_march,
        fdm_blowup=tb_fdm,
        outcome=outcome,
    )
