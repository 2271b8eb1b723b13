"""Weighted Duhamel operators on the characteristic grid.

With ``dt = dx = h`` every point on a characteristic ``x +- t = const`` through
a node is itself a node, so all integrals are trapezoid sums over stored
values without interpolation.
"""

from __future__ import annotations

import numpy as np

from .model import CharGrid, Field, ProblemSpec


def weight(a: float, y):
    """``(1 + y^2)^(-(1+a)/2)``, evaluated in log space."""
    y = np.abs(np.asarray(y, dtype=float))
    big = y > 1e150
    with np.errstate(divide="ignore"):
        # log(1 + y^2) = 2 log y + log1p(y^-2), avoiding y*y overflow
        log_term = np.where(big, 2.0 * np.log(np.where(big, y, 1.0)), np.log1p(np.where(big, 0.0, y) ** 2))
    return np.exp(-0.5 * (1.0 + a) * log_term)


def characteristic_sums(grid: CharGrid, F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Half trapezoid integrals of ``F`` along both backward characteristics.

    Returns ``(A_plus, A_minus)`` with
    ``A_plus[n, j] ~ 1/2 int_0^t F(x+t-s, s) ds`` and
    ``A_minus[n, j] ~ 1/2 int_0^t F(x-t+s, s) ds``.
    """
    # leading axes of F (beyond levels, width) are batch dimensions
    h = grid.h
    levels = F.shape[-2]
    A_plus = np.zeros_like(F)
    A_minus = np.zeros_like(F)
    q = 0.25 * h
    for n in range(1, levels):
        A_plus[..., n, :-1] = A_plus[..., n - 1, 1:] + q * (F[..., n - 1, 1:] + F[..., n, :-1])
        A_plus[..., n, -1] = q * F[..., n, -1]
        A_minus[..., n, 1:] = A_minus[..., n - 1, :-1] + q * (F[..., n - 1, :-1] + F[..., n, 1:])
        A_minus[..., n, 0] = q * F[..., n, 0]
    return A_plus, A_minus


def Lp_field(a: float, v: Field) -> Field:
    """``L'_a(v)`` at every node of the grid."""
    F = v.values * weight(a, v.grid.x)[None, :]
    A_plus, A_minus = characteristic_sums(v.grid, F)
    return Field(v.grid, A_plus + A_minus)


def Lp_bar_field(a: float, v: Field) -> Field:
    """Conjugate operator: the second characteristic integral enters with a minus sign."""
    F = v.values * weight(a, v.grid.x)[None, :]
    A_plus, A_minus = characteristic_sums(v.grid, F)
    return Field(v.grid, A_plus - A_minus)


def _node(v: Field, x: float, t: float) -> tuple[int, int]:
    try:
        n, j = v.grid.level(t), v.grid.column(x)
    except ValueError as err:
        raise ValueError(f"({x}, {t}) is not a grid node: {err}") from None
    if n >= v.values.shape[0]:
        raise ValueError(f"level t={t} not available in field")
    return n, j


def _line(v: Field, a: float, n: int, j: int, direction: int) -> float:
    # trapezoid of v*weight along the characteristic through (j, n), going
    # back to s=0; direction=+1 samples x+t-s, -1 samples x-t+s
    m = np.arange(n + 1)
    cols = j + direction * (n - m)
    inside = (cols >= 0) & (cols < v.grid.width)
    vals = np.zeros(n + 1)
    vals[inside] = v.values[m[inside], cols[inside]] * weight(a, v.grid.x[cols[inside]])
    if n == 0:
        return 0.0
    return 0.5 * v.grid.h * (vals.sum() - 0.5 * (vals[0] + vals[-1]))


def apply_Lp(a: float, v: Field, x: float, t: float) -> float:
    n, j = _node(v, x, t)
    return _line(v, a, n, j, +1) + _line(v, a, n, j, -1)


def apply_Lp_bar(a: float, v: Field, x: float, t: float) -> float:
    n, j = _node(v, x, t)
    return _line(v, a, n, j, +1) - _line(v, a, n, j, -1)


def apply_L(a: float, v: Field, x: float, t: float) -> float:
    """Iterated trapezoid over the backward triangle of dependence of ``(x, t)``."""
    n, j = _node(v, x, t)
    h = v.grid.h
    w = weight(a, v.grid.x)
    inner = np.zeros(n + 1)
    for m in range(n + 1):
        half = n - m
        lo, hi = j - half, j + half
        if half == 0:
            continue
        cols = np.arange(max(lo, 0), min(hi, v.grid.width - 1) + 1)
        vals = v.values[m, cols] * w[cols]
        s = vals.sum()
        if cols[0] == lo:
            s -= 0.5 * vals[0]
        if cols[-1] == hi:
            s -= 0.5 * vals[-1]
        inner[m] = h * s
    if n == 0:
        return 0.0
    return 0.5 * h * (inner.sum() - 0.5 * (inner[0] + inner[-1]))


def nonlinear_source(spec: ProblemSpec, U: Field) -> Field:
    """Nodewise ``|U|^p``; the weight is applied by the operators."""
    with np.errstate(over="ignore", invalid="ignore"):
        S = np.abs(U.values) ** spec.p
    out = Field(U.grid, S, blowup_time=U.blowup_time)
    if not np.all(np.isfinite(S)):
        bad = np.nonzero(~np.all(np.isfinite(S), axis=1))[0][0]
        out.blowup_time = float(bad * U.grid.h) if out.blowup_time is None else out.blowup_time
    return out
