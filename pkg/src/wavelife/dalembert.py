"""Free wave solution with the problem's initial data and its derivatives.

All functions evaluate the unit-amplitude solution (``epsilon`` not applied)
and accept numpy arrays for ``x`` and ``t``.
"""

from __future__ import annotations

import numpy as np

from .model import ProblemSpec


def u0(spec: ProblemSpec, x, t):
    d = spec.data
    xp, xm = np.add(x, t), np.subtract(x, t)
    return 0.5 * (d.f(xp) + d.f(xm)) + 0.5 * (d.g_antideriv(xp) - d.g_antideriv(xm))


def u0_t(spec: ProblemSpec, x, t):
    d = spec.data
    xp, xm = np.add(x, t), np.subtract(x, t)
    return 0.5 * (d.f1(xp) - d.f1(xm) + d.g(xp) + d.g(xm))


def u0_x(spec: ProblemSpec, x, t):
    d = spec.data
    xp, xm = np.add(x, t), np.subtract(x, t)
    return 0.5 * (d.f1(xp) + d.f1(xm) + d.g(xp) - d.g(xm))


def u0_tx(spec: ProblemSpec, x, t):
    d = spec.data
    xp, xm = np.add(x, t), np.subtract(x, t)
    return 0.5 * (d.f2(xp) - d.f2(xm) + d.g1(xp) + d.g1(xm))


def u0_tt(spec: ProblemSpec, x, t):
    d = spec.data
    xp, xm = np.add(x, t), np.subtract(x, t)
    return 0.5 * (d.f2(xp) + d.f2(xm) + d.g1(xp) - d.g1(xm))


# the free solution satisfies u_xx = u_tt identically
u0_xx = u0_tt
