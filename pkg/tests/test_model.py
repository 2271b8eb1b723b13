import math

import numpy as np
import pytest
from scipy.integrate import quad

from wavelife.model import (
    PiecewisePolynomial,
    ProblemSpec,
    build_grid,
    data_norms,
    default_bump,
    scaled,
)


def test_total_g_matches_termwise_integration():
    # (1 - x^2)^4 = sum_k C(4,k) (-1)^k x^(2k); each term integrates to 2/(2k+1)
    oracle = sum(math.comb(4, k) * (-1) ** k * 2 / (2 * k + 1) for k in range(5))
    assert oracle == pytest.approx(256 / 315, abs=1e-15)
    assert default_bump(1.0).total_g == pytest.approx(oracle, abs=1e-14)


@pytest.mark.parametrize("R", [1.0, 2.5])
def test_total_g_scales_with_R(R):
    assert default_bump(R).total_g == pytest.approx(256 * R / 315, rel=1e-14)


def test_bump_values():
    b = default_bump(1.0)
    assert b.g(0.0) == 1.0
    assert b.g(1.5) == 0.0
    assert b.g(-1.0) == 0.0
    np.testing.assert_array_equal(b.f(np.linspace(-3, 3, 7)), 0.0)


def test_bump_rejects_small_radius():
    with pytest.raises(ValueError):
        default_bump(0.5)


def test_g_is_c1_across_support_edge():
    b = default_bump(1.0)
    for edge in (-1.0, 1.0):
        inside = b.g1(edge - np.sign(edge) * 1e-9)
        outside = b.g1(edge + np.sign(edge) * 1e-9)
        assert abs(inside - outside) < 1e-12
    assert np.all(np.isfinite(b.f2(np.linspace(-2, 2, 101))))


def test_running_integral_limits_and_quadrature():
    b = default_bump(1.0)
    assert b.g_antideriv(-1.0) == 0.0
    assert b.g_antideriv(-5.0) == 0.0
    assert b.g_antideriv(1.0) == pytest.approx(b.total_g, abs=1e-15)
    assert b.g_antideriv(7.0) == b.total_g
    for x in (-0.7, 0.0, 0.3, 0.99):
        ref, _ = quad(lambda y: (1 - y * y) ** 4, -1, x, epsabs=1e-14)
        assert b.g_antideriv(x) == pytest.approx(ref, abs=1e-13)


def test_piecewise_two_pieces_with_gap():
    pp = PiecewisePolynomial([(-2, -1, [1.0]), (0, 1, [0.0, 2.0])])
    anti, total = pp.running_integral()
    assert total == pytest.approx(1.0 + 1.0)
    assert anti(-0.5) == pytest.approx(1.0)
    assert anti(0.5) == pytest.approx(1.0 + 0.25)
    with pytest.raises(ValueError):
        PiecewisePolynomial([(0, 1, [1.0]), (0.5, 2, [1.0])])


def test_data_norms_default_bump():
    n = data_norms(default_bump(1.0), 1.0, h=0.01)
    # g' = -8x(1-x^2)^3 peaks at x^2 = 1/7
    x = 1 / math.sqrt(7)
    gp = 8 * x * (1 - x * x) ** 3
    assert n.N == pytest.approx(1.0)
    assert n.M == pytest.approx(1.0 + gp, rel=1e-5)
    assert n.N <= n.M


def test_scaled_data_doubles_total():
    b = default_bump(1.0)
    assert scaled(b, 2.0).total_g == pytest.approx(2 * b.total_g)


def test_problem_spec_validation():
    with pytest.raises(ValueError):
        ProblemSpec(p=1.0, a=0, epsilon=0.1)
    with pytest.raises(ValueError):
        ProblemSpec(p=2, a=0, epsilon=0.1, R=0.5)
    with pytest.raises(ValueError):
        ProblemSpec(p=2, a=0, epsilon=0.1, R=1.0, data=default_bump(2.0))
    assert ProblemSpec(p=1.5, a=0, epsilon=0.1).low_regularity
    assert not ProblemSpec(p=2, a=0, epsilon=0.1).low_regularity


def test_grid_small_example():
    g = build_grid(1.0, 1.0, 0.5)
    np.testing.assert_allclose(g.t, [0.0, 0.5, 1.0])
    mask = g.cone_mask()
    assert g.x[mask[-1]].min() == -2.0 and g.x[mask[-1]].max() == 2.0
    assert g.x[0] == -2.5  # one ghost column


def test_grid_zero_horizon():
    g = build_grid(0.0, 1.0, 0.1)
    assert g.nt == 0 and len(g.t) == 1


def test_grid_sizes_for_T10():
    g = build_grid(10.0, 1.0, 0.01)
    assert g.nt == 1000 and g.K == 100
    # brute-force count of stored and in-cone nodes
    stored = sum(g.width for _ in range(g.nt + 1))
    cone = sum(1 for n in range(g.nt + 1) for i in range(-g.I, g.I + 1) if abs(i) <= n + g.K + 1)
    assert g.node_count == stored == 1001 * 2203
    assert g.cone_node_count == cone


def test_grid_snaps_h():
    with pytest.warns(UserWarning):
        g = build_grid(1.0, 1.0, 0.3)
    assert g.K * g.h == pytest.approx(1.0, abs=1e-15)


def test_grid_rejects_oversized():
    with pytest.raises(ValueError, match="nodes"):
        build_grid(1e4, 1.0, 1e-3)


def test_grid_off_node_lookup():
    g = build_grid(1.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        g.column(0.05)
    with pytest.raises(ValueError):
        g.level(0.33)


def test_bump_data_pickles():
    import pickle

    b = pickle.loads(pickle.dumps(default_bump(1.5)))
    assert b.total_g == pytest.approx(256 * 1.5 / 315)
    assert b.g_antideriv(2.0) == pytest.approx(b.total_g)
