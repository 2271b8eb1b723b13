"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are also repeated in the pytest terminal summary (see
``conftest.py``). Run directly with ``python3 tests/test_acceptance.py`` to
get only this suite.
"""

import time

import numpy as np
import pytest

from wavelife.apriori import I_minus, I_plus, verify_apriori
from wavelife.blowup import blowup_time_closed, comparison_check, ode_integrate
from wavelife.fdm import compare_solvers, leapfrog_solve
from wavelife.lifespan import fit_exp_law, fit_power_law, sweep, threshold_sensitivity
from wavelife.model import ProblemSpec, build_grid
from wavelife.picard import march_solve, pde_residual, picard_solve, reconstruct_w

RESULTS: list[str] = []
# (label, outside-cone max) for every field an acceptance run produced
SUPPORT: list[tuple[str, float]] = []

EPS_POWER = [0.5, 0.4, 0.3, 0.25, 0.2]
EPS_EXP = [0.9, 0.7, 0.55, 0.45]
# a = 0 lifespans reach ~1900 at eps = 0.45; see the README for the horizon choice
EXP_H, EXP_H_COARSE, EXP_T_MAX = 0.05, 0.1, 4000.0


def report(n, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def track(label, field):
    SUPPORT.append((label, field.outside_cone_max()))


def track_rows(label, table):
    for r in table.rows:
        SUPPORT.append((f"{label} eps={r.epsilon:g}", r.outside_sup))


@pytest.fixture(scope="module")
def power_sweeps():
    base = ProblemSpec(p=2, a=-1, epsilon=1.0)
    coarse = sweep(base, EPS_POWER, 0.01, 1e6, T_max=100)
    fine = sweep(base, EPS_POWER, 0.005, 1e6, T_max=100)
    track_rows("a=-1 sweep h=0.01", coarse)
    track_rows("a=-1 sweep h=0.005", fine)
    return coarse, fine


@pytest.fixture(scope="module")
def exp_sweep():
    base = ProblemSpec(p=2, a=0, epsilon=1.0)
    table = sweep(base, EPS_EXP, EXP_H, 1e6, T_max=EXP_T_MAX)
    coarse = sweep(base, EPS_EXP, EXP_H_COARSE, 1e6, T_max=EXP_T_MAX)
    track_rows(f"a=0 sweep h={EXP_H}", table)
    track_rows(f"a=0 sweep h={EXP_H_COARSE}", coarse)
    return table, coarse


def test_c01_closed_form_blowup_time():
    t0 = time.perf_counter()
    X = blowup_time_closed(2, -1, 1, 0.1)
    sol = ode_integrate(2, -1, 1, 0.1)
    elapsed = time.perf_counter() - t0
    closed_err = abs(X - 11) / 11
    ode_err = abs(sol.blowup_x - 11) / 11
    ok = closed_err <= 1e-12 and ode_err <= 0.01 and elapsed < 1.0
    report(1, ok, f"X={X:.15g} (rel err {closed_err:.1e}), ODE {sol.blowup_x:.6g} "
                  f"(rel err {ode_err:.2e}), {elapsed:.3f}s")
    assert ok


def test_c02_power_law_exponent(power_sweeps):
    coarse, fine = power_sweeps
    assert all(not r.global_flag and r.error is None for r in coarse.rows + fine.rows)
    fit = fit_power_law(coarse, p=2, a=-1)
    shifts = [abs(f.T_num - c.T_num) / c.T_num for c, f in zip(coarse.rows, fine.rows)]
    Ts = [r.T_num for r in coarse.rows]
    monotone = all(np.diff(Ts) > 0)
    # companion checks: threshold robustness and fit residual
    sens = threshold_sensitivity(ProblemSpec(p=2, a=-1, epsilon=0.3), 0.01, 100)
    ok = (fit.slope_rel_error <= 0.15 and max(shifts) < 0.05 and monotone
          and fit.residual <= 0.3 and sens < 0.02)
    report(2, ok, f"slope {fit.slope:.4f} (target -1, rel err {fit.slope_rel_error:.3f}), "
                  f"max refinement shift {max(shifts):.4f}, fit residual {fit.residual:.3f}, "
                  f"threshold sensitivity {sens:.4f}, T={['%.4g' % t for t in Ts]}")
    assert ok


def test_c03_exponential_law_indicator(exp_sweep):
    table, coarse = exp_sweep
    assert all(not r.global_flag and r.error is None for r in table.rows), table.to_csv()
    fit = fit_exp_law(table, p=2)
    Ts = [r.T_num for r in table.rows]
    # reported only: the coarse mesh is not part of the criterion
    shift = max(abs(c.T_num - r.T_num) / r.T_num for c, r in zip(coarse.rows, table.rows))
    ok = fit.spread <= 2.5 and fit.slope_rel_error <= 0.40 and all(np.diff(Ts) > 0)
    report(3, ok, f"spread of eps*log T {fit.spread:.4f} (<= 2.5), log-log-log slope {fit.slope:.4f} "
                  f"(rel err {fit.slope_rel_error:.3f} <= 0.40), h={EXP_H}, T={['%.5g' % t for t in Ts]}, "
                  f"shift vs h={EXP_H_COARSE}: {shift:.4f}")
    assert ok


def test_c04_global_existence_indicator():
    t0 = time.perf_counter()
    spec = ProblemSpec(p=2, a=1, epsilon=0.05)
    grid = build_grid(200.0, 1.0, 0.05)
    U, tb = march_solve(spec, grid, keep_field=False)
    elapsed = time.perf_counter() - t0
    track("a=1 global run", U)
    n2 = grid.level(2 * spec.R)
    ref = U.level_sup[n2]
    late = float(np.max(U.level_sup[n2:]))
    ok = tb is None and U.levels == grid.nt + 1 and late <= 1.5 * ref and elapsed < 120
    report(4, ok, f"no blow-up to T={grid.T:g}, sup over t>=2R {late:.5g} vs 1.5 x {ref:.5g}, "
                  f"{elapsed:.1f}s")
    assert ok


def test_c05_apriori_bound():
    rng = np.random.default_rng(2024)
    details, ok = [], True
    for a in (-1.0, 0.0, 1.0):
        r4 = verify_apriori(a, 4.0, samples=200, seed=0, p=2)
        r8 = verify_apriori(a, 8.0, samples=200, seed=0, p=2)
        q = r8.worst_ratio / r4.worst_ratio
        ok &= q <= 2.0
        details.append(f"a={a:g}: C(8)/C(4)={q:.3f}")
    # closed form vs adaptive quadrature (raises ConsistencyError beyond 1e-9)
    quad_points = 0
    for _ in range(300):
        t = rng.uniform(0, 12)
        x = rng.uniform(-(t + 1), t + 1)
        a = rng.choice([-1.0, 0.0, 1.0])
        I_plus(x, t, a, 1.0, check=True)
        I_minus(x, t, a, 1.0, check=True)
        quad_points += 1
    sym = 0.0
    for _ in range(1000):
        t = rng.uniform(0, 12)
        x = rng.uniform(-(t + 1), t + 1)
        a = rng.uniform(-1.5, 1.5)
        sym = max(sym, abs(I_plus(-x, t, a, check=False) - I_minus(x, t, a, check=False)))
    ok &= sym <= 1e-12
    report(5, ok, "; ".join(details) + f"; quadrature agreement on {quad_points} points; "
                  f"max symmetry defect {sym:.1e}")
    assert ok


def test_c06_picard_contraction():
    spec = ProblemSpec(p=2, a=0, epsilon=0.01)
    U, diag = picard_solve(spec, build_grid(2.0, 1.0, 0.02))
    track("picard p=2 a=0 eps=0.01", U)
    bound = 2 * diag.norms.M * spec.epsilon * 1.01
    worst = max(diag.ratios)
    ok = diag.converged and worst <= 0.5 and U.sup_norm <= bound
    report(6, ok, f"{diag.iterations} iterations, max ratio {worst:.4f} (<= 0.5), "
                  f"||U|| {U.sup_norm:.6g} <= 2 M eps 1.01 = {bound:.6g}")
    assert ok


def test_c07_reconstruction_residual():
    spec = ProblemSpec(p=2, a=0, epsilon=0.05)
    res = []
    for h in (0.04, 0.02):
        U, _ = march_solve(spec, build_grid(1.0, 1.0, h))
        w = reconstruct_w(spec, U)
        track(f"march h={h} (residual)", U)
        track(f"w h={h}", w)
        res.append(pde_residual(spec, w))
    factor = res[0] / res[1]
    ok = factor >= 1.8
    report(7, ok, f"residual {res[0]:.3e} -> {res[1]:.3e}, factor {factor:.3f} (>= 1.8)")
    assert ok


def test_c08_solver_cross_validation():
    spec = ProblemSpec(p=2, a=0, epsilon=0.05)
    g = build_grid(1.0, 1.0, 0.01)
    Up, diag = picard_solve(spec, g, tol=1e-12)
    Um, _ = march_solve(spec, g)
    mp = float(np.max(np.abs(Up.values - Um.values)))
    track("picard h=0.01", Up)
    track("march h=0.01", Um)
    lf = {}
    for h in (0.02, 0.01):
        gh = build_grid(1.0, 1.0, h)
        U, _ = march_solve(spec, gh)
        u, ut, _ = leapfrog_solve(spec, gh)
        track(f"leapfrog u h={h}", u)
        track(f"leapfrog u_t h={h}", ut)
        lf[h] = float(np.max(np.abs(U.values - ut.values)))
    halving = lf[0.02] / lf[0.01]
    near = compare_solvers(ProblemSpec(p=2, a=-1, epsilon=0.5), build_grid(10.0, 1.0, 0.01))
    gap = near.blowup_rel_gap
    ok = (diag.converged and mp <= 1e-8 and lf[0.01] <= 5e-3 and halving >= 1.8
          and gap is not None and gap <= 0.05)
    report(8, ok, f"march vs picard {mp:.1e}; march vs leapfrog {lf[0.01]:.2e} at h=0.01, "
                  f"factor {halving:.2f} on halving; blow-up times {near.march_blowup:.4g} vs "
                  f"{near.fdm_blowup:.4g} (gap {gap:.4f})")
    assert ok


def test_c10_comparison_principle():
    spec = ProblemSpec(p=2, a=-1, epsilon=0.3)
    U, tb = march_solve(spec, build_grid(20.0, 1.0, 0.01))
    track("march a=-1 eps=0.3 T=20", U)
    rep = comparison_check(spec, U, 1e-3, slack=0.0)
    margin = float(np.min(rep.V - rep.W))
    ok = rep.passed
    report(10, ok, f"V > W on {rep.xs.size} diagonal nodes up to x={rep.xs[-1]:.4g} "
                   f"(march stopped at t={tb}), min margin {margin:.3e}")
    assert ok


def test_c09_support_invariant(power_sweeps, exp_sweep):
    # runs last in this module so that every other run has been recorded
    bad = [(name, v) for name, v in SUPPORT if v != 0.0]
    ok = not bad and len(SUPPORT) > 20
    report(9, ok, f"{len(SUPPORT)} fields checked, nonzero outside |x| <= t+R: {bad or 'none'}")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
