"""Growth factor ``E_a(T)``, the cutoff integrals ``I_+-`` and an empirical
estimate of the constant in ``||L'_a(|U|^p)|| <= C E_a(T) ||U||^p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.ndimage import uniform_filter

# |a| below this uses the logarithmic antiderivative
LOG_BRANCH = 1e-12
QUAD_AGREEMENT = 1e-9


class ConsistencyError(RuntimeError):
    pass


def E_a(T: float, R: float, a: float) -> float:
    if abs(a) < LOG_BRANCH:
        return math.log(T + 2 * R)
    if a < 0:
        return (T + 2 * R) ** (-a)
    return 1.0


def _F(u: float, a: float) -> float:
    # int_0^u (1+v)^(-1-a) dv for u >= 0
    if abs(a) < LOG_BRANCH:
        return math.log1p(u)
    # expm1 keeps small |a| free of cancellation
    return math.expm1(-a * math.log1p(u)) / (-a)


def _Phi(u: float, a: float) -> float:
    # odd antiderivative of (1+|u|)^(-1-a)
    return math.copysign(_F(abs(u), a), u)


def _cutoff_interval(c: float, t: float, R: float):
    # s in [0, t] with |c - s| <= s + R
    if c < -R:
        return None
    lo = max(0.0, 0.5 * (c - R))
    return (lo, t) if lo < t else None


def _I(c: float, t: float, a: float, R: float, check: bool) -> float:
    span = _cutoff_interval(c, t, R)
    if span is None:
        return 0.0
    lo, hi = span
    value = _Phi(c - lo, a) - _Phi(c - hi, a)
    if check:
        pts = [c] if lo < c < hi else None
        ref, _ = quad(lambda s: (1.0 + abs(c - s)) ** (-1.0 - a), lo, hi,
                      points=pts, epsabs=1e-14, epsrel=1e-13, limit=200)
        if abs(ref - value) > QUAD_AGREEMENT * max(1.0, abs(value)):
            raise ConsistencyError(
                f"closed form {value!r} vs quadrature {ref!r} at c={c}, t={t}, a={a}, R={R}")
    return value


def I_plus(x: float, t: float, a: float, R: float = 1.0, check: bool = True) -> float:
    """``int_0^t chi_+ (1 + |t - s + x|)^(-1-a) ds``."""
    return _I(t + x, t, a, R, check)


def I_minus(x: float, t: float, a: float, R: float = 1.0, check: bool = True) -> float:
    """``int_0^t chi_- (1 + |t - s - x|)^(-1-a) ds``."""
    return _I(t - x, t, a, R, check)


def branch_bounds(a: float, T: float, R: float = 1.0, n: int = 60) -> dict[str, float]:
    """Largest ``I / E_a(T)`` over an ``(x, t)`` scan with ``0 <= x <= t + R``.

    ``I_minus`` is split into the regimes ``t - x >= 0`` and ``t - x < 0``.
    """
    E = E_a(T, R, a)
    out = {"I_plus": 0.0, "I_minus_inner": 0.0, "I_minus_outer": 0.0}
    for t in np.linspace(0.0, T, n):
        for x in np.linspace(0.0, t + R, n):
            out["I_plus"] = max(out["I_plus"], I_plus(x, t, a, R, check=False) / E)
            key = "I_minus_inner" if t - x >= 0 else "I_minus_outer"
            out[key] = max(out[key], I_minus(x, t, a, R, check=False) / E)
    return out


@dataclass(frozen=True)
class AprioriReport:
    T: float
    a: float
    p: float
    samples: int
    worst_ratio: float
    worst_location: tuple[float, float]


def random_cone_fields(grid, samples: int, rng: np.random.Generator) -> np.ndarray:
    """Smoothed uniform noise in the cone, each sample normalised to sup 1."""
    mask = grid.cone_mask()
    U = rng.uniform(-1.0, 1.0, size=(samples,) + mask.shape)
    U = uniform_filter(U, size=(1, 3, 3), mode="constant")
    U = np.where(mask, U, 0.0)
    U /= np.max(np.abs(U), axis=(1, 2), keepdims=True)
    return U


def verify_apriori(
    a: float,
    T: float,
    R: float = 1.0,
    samples: int = 200,
    seed: int = 0,
    p: float = 2.0,
    h: float = 0.05,
    chunk: int = 25,
) -> AprioriReport:
    from .duhamel import characteristic_sums, weight
    from .model import build_grid

    if samples < 1:
        raise ValueError("samples must be >= 1")
    grid = build_grid(T, R, h)
    w = weight(a, grid.x)
    E = E_a(grid.T, R, a)
    worst, where = -1.0, (0.0, 0.0)
    # one child generator per sample keeps results independent of chunking
    children = np.random.SeedSequence(seed).spawn(samples)
    for start in range(0, samples, chunk):
        block = children[start : start + chunk]
        U = np.stack([random_cone_fields(grid, 1, np.random.default_rng(s))[0] for s in block])
        A_plus, A_minus = characteristic_sums(grid, np.abs(U) ** p * w)
        L = np.abs(A_plus + A_minus)
        k, n, j = np.unravel_index(int(np.argmax(L)), L.shape)
        ratio = float(L[k, n, j]) / E
        if ratio > worst:
            worst, where = ratio, (float(grid.x[j]), float(grid.t[n]))
    return AprioriReport(T=T, a=a, p=p, samples=samples, worst_ratio=worst, worst_location=where)
