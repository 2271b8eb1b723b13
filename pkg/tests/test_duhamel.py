import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import dblquad, quad

from wavelife.duhamel import (
    Lp_bar_field,
    Lp_field,
    apply_L,
    apply_Lp,
    apply_Lp_bar,
    nonlinear_source,
    weight,
)
from wavelife.model import Field, ProblemSpec, build_grid


def const_field(grid, value):
    return Field(grid, np.full((grid.nt + 1, grid.width), float(value)))


def smooth_field(grid, fn):
    X, T = np.meshgrid(grid.x, grid.t)
    return Field(grid, fn(X, T))


def test_weight_range_and_log_space():
    y = np.array([0.0, 1.0, 1e3, 1e200])
    w = weight(0.5, y)
    assert np.all((w > 0) & (w <= 1))
    assert weight(-1.0, y).tolist() == [1.0] * 4
    assert weight(0.0, 3.0) == pytest.approx((1 + 9) ** -0.5)


def test_zero_input():
    g = build_grid(1.0, 1.0, 0.1)
    v = const_field(g, 0.0)
    assert apply_L(0.3, v, 0.0, 1.0) == 0.0
    assert apply_Lp(0.3, v, 0.0, 1.0) == 0.0
    assert apply_Lp_bar(0.3, v, 0.0, 1.0) == 0.0


def test_L_of_one_unit_weight():
    g = build_grid(2.0, 1.0, 0.1)
    v = const_field(g, 1.0)
    # 1/2 int_0^t 2(t-s) ds = t^2/2; the trapezoid is exact here
    for t in (0.5, 1.0, 2.0):
        assert apply_L(-1.0, v, 0.3, t) == pytest.approx(t * t / 2, abs=1e-12)


def test_L_of_one_weighted_against_dblquad():
    ref, _ = dblquad(lambda y, s: 1 / (1 + y * y), 0, 1, lambda s: -(1 - s), lambda s: 1 - s,
                     epsabs=1e-13)
    ref *= 0.5
    errs = []
    for h in (0.05, 0.025):
        v = const_field(build_grid(1.0, 1.0, h), 1.0)
        errs.append(abs(apply_L(1.0, v, 0.0, 1.0) - ref))
    assert errs[0] < 5 * 0.05**2
    assert errs[0] / errs[1] > 3.5


def test_Lp_of_one_unit_weight():
    g = build_grid(3.0, 1.0, 0.1)
    v = const_field(g, 1.0)
    for t in (0.0, 1.0, 3.0):
        assert apply_Lp(-1.0, v, 0.4, t) == pytest.approx(t, abs=1e-12)


def test_Lp_a0_against_quadrature():
    # v = 1, a = 0: two lines x +- (t - s) with weight (1 + y^2)^(-1/2)
    f = lambda s: 0.5 * (1 + (2 - s) ** 2) ** -0.5
    ref = 2 * quad(f, 0, 2, epsabs=1e-14)[0]
    errs = []
    for h in (0.04, 0.02, 0.01):
        v = const_field(build_grid(2.0, 1.0, h), 1.0)
        errs.append(abs(apply_Lp(0.0, v, 0.0, 2.0) - ref))
    assert errs[-1] < 1e-4
    assert errs[0] / errs[1] >= 3.5 and errs[1] / errs[2] >= 3.5


def test_Lp_convergence_smooth_field():
    fn = lambda X, T: np.cos(X) * np.exp(-0.3 * T)
    x0, t0, a = 0.4, 1.2, 0.5
    integrand_p = lambda s: fn(x0 + t0 - s, s) * weight(a, x0 + t0 - s)
    integrand_m = lambda s: fn(x0 - t0 + s, s) * weight(a, x0 - t0 + s)
    ref = 0.5 * (quad(integrand_p, 0, t0, epsabs=1e-14)[0] + quad(integrand_m, 0, t0, epsabs=1e-14)[0])
    errs = []
    for h in (0.04, 0.02, 0.01):
        v = smooth_field(build_grid(1.2, 1.0, h), fn)
        errs.append(abs(apply_Lp(a, v, x0, t0) - ref))
    assert errs[0] / errs[1] >= 3.5 and errs[1] / errs[2] >= 3.5


def test_Lp_bar_even_field_vanishes_at_origin():
    g = build_grid(2.0, 1.0, 0.05)
    v = smooth_field(g, lambda X, T: np.exp(-X * X) * (1 + T))
    assert apply_Lp_bar(0.2, v, 0.0, 1.5) == pytest.approx(0.0, abs=1e-15)


def test_sum_of_Lp_and_Lp_bar_is_twice_first_line():
    rng = np.random.default_rng(3)
    g = build_grid(1.0, 1.0, 0.05)
    v = Field(g, rng.uniform(-1, 1, (g.nt + 1, g.width)))
    a, x, t = 0.7, 0.25, 0.8
    n, j = g.level(t), g.column(x)
    # direct trapezoid along x + t - s
    vals = np.array([v.values[m, j + (n - m)] * weight(a, g.x[j + (n - m)]) for m in range(n + 1)])
    first = 0.5 * g.h * (vals.sum() - 0.5 * (vals[0] + vals[-1]))
    assert apply_Lp(a, v, x, t) + apply_Lp_bar(a, v, x, t) == pytest.approx(2 * first, abs=1e-14)


def test_field_operators_match_pointwise():
    rng = np.random.default_rng(4)
    g = build_grid(1.0, 1.0, 0.1)
    v = Field(g, rng.uniform(0, 1, (g.nt + 1, g.width)))
    Lp, Lb = Lp_field(0.3, v), Lp_bar_field(0.3, v)
    for n in range(g.nt + 1):
        for j in range(0, g.width, 3):
            x, t = g.x[j], g.t[n]
            assert Lp.values[n, j] == pytest.approx(apply_Lp(0.3, v, x, t), abs=1e-14)
            assert Lb.values[n, j] == pytest.approx(apply_Lp_bar(0.3, v, x, t), abs=1e-14)


def test_off_grid_point_rejected():
    g = build_grid(1.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        apply_Lp(0.0, const_field(g, 1.0), 0.05, 0.5)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), a=st.floats(-1.0, 2.0))
def test_monotone_in_nonnegative_input(seed, a):
    rng = np.random.default_rng(seed)
    g = build_grid(1.0, 1.0, 0.1)
    w = rng.uniform(0, 1, (g.nt + 1, g.width))
    v = w + rng.uniform(0, 1, w.shape)
    assert np.all(Lp_field(a, Field(g, v)).values >= Lp_field(a, Field(g, w)).values)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), a=st.floats(-1.0, 2.0), p=st.floats(1.1, 4.0))
def test_domination_by_shifted_exponent(seed, a, p):
    rng = np.random.default_rng(seed)
    g = build_grid(1.0, 1.0, 0.1)
    S = rng.uniform(0, 1, (g.nt + 1, g.width)) ** p
    lhs = np.abs(Lp_field(a + 2, Field(g, S * g.x[None, :])).values)
    rhs = Lp_field(a + 1, Field(g, S)).values
    assert np.all(lhs <= rhs + 1e-15)


def test_L_is_time_integral_of_Lp():
    fn = lambda X, T: np.exp(-X * X) * (1 + 0.5 * T)
    errs = []
    for h in (0.04, 0.02):
        g = build_grid(1.0, 1.0, h)
        v = smooth_field(g, fn)
        Lp = Lp_field(0.0, v)
        j = g.column(0.2)
        col = Lp.values[:, j]
        integral = h * (col.sum() - 0.5 * (col[0] + col[-1]))
        errs.append(abs(apply_L(0.0, v, 0.2, 1.0) - integral))
    assert errs[1] < 1e-3
    assert errs[0] / errs[1] > 3.0


def test_nonlinear_source_values():
    g = build_grid(0.5, 1.0, 0.1)
    s2 = ProblemSpec(p=2, a=0, epsilon=1)
    s25 = ProblemSpec(p=2.5, a=0, epsilon=1)
    assert np.all(nonlinear_source(s2, const_field(g, 0.0)).values == 0)
    assert np.all(nonlinear_source(s2, const_field(g, 2.0)).values == 4.0)
    np.testing.assert_allclose(nonlinear_source(s25, const_field(g, -3.0)).values, 3**2.5, rtol=1e-15)
    assert 3**2.5 == pytest.approx(15.588457, abs=1e-6)


def test_nonlinear_source_overflow_marks_blowup():
    g = build_grid(0.5, 1.0, 0.1)
    vals = np.zeros((g.nt + 1, g.width))
    vals[3, 5] = 1e200
    out = nonlinear_source(ProblemSpec(p=2, a=0, epsilon=1), Field(g, vals))
    assert out.blowup_time == pytest.approx(0.3)
