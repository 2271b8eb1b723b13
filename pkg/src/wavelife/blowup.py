"""Comparison ODE ``W' = c |W|^p / (1+x)^(1+a)``, ``W(R) = G eps``, and the
diagonal functional ``V(x, x+R)`` it bounds from below.

The constant ``c`` is not known constructively; it is exposed as ``c`` and
defaults to 1 in the closed-form API.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .apriori import LOG_BRANCH
from .model import BumpData, Field, ProblemSpec
from .picard import reconstruct_w


def G_from_data(data: BumpData) -> float:
    """Half the total integral of ``g``, the free plateau on ``t = x + R``."""
    if not data.total_g > 0:
        raise ValueError(
            f"blow-up comparison needs a positive total integral of g (got {data.total_g:.6g})")
    return 0.5 * data.total_g


# below this |a| the closed-form inversion switches to a log1p form
SMALL_A = 1e-3


def _weight_integral(x, a: float, R: float):
    # int_R^x (1+y)^(-1-a) dy
    x = np.asarray(x, dtype=float)
    L = np.log1p(x) - math.log1p(R)
    if abs(a) < LOG_BRANCH:
        return L
    return -(1.0 + R) ** (-a) * np.expm1(-a * L) / a


def blowup_time_closed(p: float, a: float, R: float, Geps: float, c: float = 1.0) -> Optional[float]:
    """Blow-up abscissa ``X`` of the comparison ODE, or ``None`` if ``W`` is global.

    The branch ``a > 0`` (finite only for large enough data) is an extension
    of the ``a <= 0`` formulas.
    """
    if not p > 1:
        raise ValueError("p must be > 1")
    if Geps <= 0 or c <= 0:
        return None
    k = Geps ** (1.0 - p) / ((p - 1.0) * c)
    if abs(a) < LOG_BRANCH:
        return (1.0 + R) * math.exp(k) - 1.0
    base = (1.0 + R) ** (-a) - a * k
    if base <= 0:
        return None
    if abs(a) >= SMALL_A:
        return base ** (-1.0 / a) - 1.0
    # small |a|: base is 1 - O(a), so work with log1p to avoid cancellation
    z = -a * k * (1.0 + R) ** a
    return (1.0 + R) * math.exp(-math.log1p(z) / a) - 1.0


def W_exact(x, p: float, a: float, R: float, Geps: float, c: float = 1.0):
    """Closed-form comparison solution; ``inf`` at and beyond blow-up."""
    x = np.asarray(x, dtype=float)
    if Geps <= 0:
        return np.zeros_like(x)
    s = Geps ** (1.0 - p) - (p - 1.0) * c * _weight_integral(x, a, R)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(s > 0, np.abs(s) ** (-1.0 / (p - 1.0)), np.inf)
    return out


@dataclass
class OdeSolution:
    xs: np.ndarray
    ws: np.ndarray
    blowup_x: Optional[float]


def ode_integrate(
    p: float,
    a: float,
    R: float,
    Geps: float,
    threshold: float = 1e12,
    c: float = 1.0,
    x_max: Optional[float] = None,
    rtol: float = 1e-10,
    min_step: float = 1e-12,
) -> OdeSolution:
    """Adaptive classical RK4 with step-doubling error control."""
    if x_max is None:
        X = blowup_time_closed(p, a, R, Geps, c)
        x_max = 10.0 * (1.0 + X) if X is not None else 1e6

    def rhs(x, W):
        return c * abs(W) ** p / (1.0 + x) ** (1.0 + a)

    def rk4(x, W, h):
        k1 = rhs(x, W)
        k2 = rhs(x + h / 2, W + h / 2 * k1)
        k3 = rhs(x + h / 2, W + h / 2 * k2)
        k4 = rhs(x + h, W + h * k3)
        return W + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    x, W = float(R), float(Geps)
    xs, ws = [x], [W]
    if W == 0:
        return OdeSolution(np.array([R, x_max]), np.zeros(2), None)
    h = 1e-3 * (1.0 + R)
    blowup_x = None
    while x < x_max:
        h = min(h, x_max - x)
        full = rk4(x, W, h)
        half = rk4(x + h / 2, rk4(x, W, h / 2), h / 2)
        err = abs(half - full) / 15.0
        scale = rtol * max(abs(half), 1e-300)
        if math.isfinite(half) and err <= scale:
            x, W = x + h, half + (half - full) / 15.0
            xs.append(x)
            ws.append(W)
            if W > threshold:
                blowup_x = x
                break
            grow = 2.0 if err == 0 else min(2.0, 0.9 * (scale / err) ** 0.2)
            h *= max(grow, 0.2)
        else:
            h *= 0.25 if not math.isfinite(half) else max(0.1, 0.9 * (scale / err) ** 0.2)
            if h < min_step:
                blowup_x = x
                break
    return OdeSolution(np.array(xs), np.array(ws), blowup_x)


def lower_bound_functional(spec: ProblemSpec, solved: Field) -> tuple[np.ndarray, np.ndarray]:
    """``V(x, x+R)`` at diagonal nodes ``x = R, R+h, ...`` covered by ``solved``."""
    grid = solved.grid
    w = reconstruct_w(spec, solved)
    levels = w.values.shape[0]
    i = np.arange(grid.K, levels - grid.K)
    xs = i * grid.h
    V = w.values[i + grid.K, grid.I + i]
    return xs, V


@dataclass
class ComparisonReport:
    passed: bool
    first_violation: Optional[float]
    xs: np.ndarray
    V: np.ndarray
    W: np.ndarray


def comparison_check(spec: ProblemSpec, solved: Field, c_used: float, slack: float = 1e-12) -> ComparisonReport:
    """Check ``V(x, x+R) > W(x)`` on all diagonal nodes, ``W`` built with ``c_used``."""
    G = G_from_data(spec.data)
    xs, V = lower_bound_functional(spec, solved)
    if c_used == 0:
        W = np.full_like(xs, G * spec.epsilon)
    else:
        W = W_exact(xs, spec.p, spec.a, spec.R, G * spec.epsilon, c_used)
    ok = V > W - slack
    bad = np.nonzero(~ok)[0]
    first = float(xs[bad[0]]) if bad.size else None
    return ComparisonReport(passed=bool(ok.all()) and xs.size > 0, first_violation=first, xs=xs, V=V, W=W)
