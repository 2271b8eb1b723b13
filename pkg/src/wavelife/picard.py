"""Solvers for ``U = eps * u0_t + L'_a(|U|^p)`` with ``U = u_t``.

``picard_solve`` iterates the whole space-time field at once; ``march_solve``
fills time levels causally and is the one used for long lifespan runs. Both
solve the same discrete trapezoid equations, so where both finish they agree
up to their stopping tolerances.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid

from . import dalembert
from .apriori import E_a
from .duhamel import characteristic_sums, weight
from .model import CharGrid, DataNorms, Field, ProblemSpec, data_norms

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 200
DEFAULT_THRESHOLD = 1e6


@dataclass
class PicardDiagnostics:
    diffs: list[float] = field(default_factory=list)
    ratios: list[float] = field(default_factory=list)
    norms: Optional[DataNorms] = None
    iterations: int = 0
    converged: bool = False
    contraction_budget: float = float("nan")
    sup_norms: list[float] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["iteration", "diff", "ratio"])
        for k, d in enumerate(self.diffs):
            r = self.ratios[k - 1] if k >= 1 else ""
            out.writerow([k + 1, f"{d:.17g}", r if r == "" else f"{r:.17g}"])
        return buf.getvalue()


class NotConverged(RuntimeError):
    """Picard iteration failed to contract; usually the horizon is past the lifespan."""

    def __init__(self, message: str, diagnostics: PicardDiagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


def free_part(spec: ProblemSpec, grid: CharGrid) -> np.ndarray:
    """``eps * u0_t`` on every node, exactly zero outside the cone."""
    vals = spec.epsilon * dalembert.u0_t(spec, grid.x[None, :], grid.t[:, None])
    return np.where(grid.cone_mask(), vals, 0.0)


def _iterate(spec: ProblemSpec, grid: CharGrid, free: np.ndarray, U: np.ndarray) -> np.ndarray:
    F = np.abs(U) ** spec.p * weight(spec.a, grid.x)[None, :]
    A_plus, A_minus = characteristic_sums(grid, F)
    return np.where(grid.cone_mask(), free + A_plus + A_minus, 0.0)


def picard_iterate(spec: ProblemSpec, U: Field) -> Field:
    """One step ``U -> eps u0_t + L'_a(|U|^p)``."""
    with np.errstate(over="ignore", invalid="ignore"):
        vals = _iterate(spec, U.grid, free_part(spec, U.grid), U.values)
    out = Field(U.grid, vals)
    if not np.all(np.isfinite(vals)):
        bad = int(np.nonzero(~np.all(np.isfinite(vals), axis=1))[0][0])
        out.blowup_time = bad * U.grid.h
    return out


def picard_solve(
    spec: ProblemSpec,
    grid: CharGrid,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[Field, PicardDiagnostics]:
    if tol <= 0:
        raise ValueError("tol must be positive")
    diag = PicardDiagnostics(norms=data_norms(spec.data, spec.R, grid.h))
    free = free_part(spec, grid)
    U = free
    diag.sup_norms.append(float(np.max(np.abs(U))))
    with np.errstate(over="ignore", invalid="ignore"):
        for it in range(1, max_iter + 1):
            V = _iterate(spec, grid, free, U)
            d = float(np.max(np.abs(V - U)))
            diag.iterations = it
            if not np.isfinite(d):
                raise NotConverged(f"iterates overflowed at iteration {it}", diag)
            diag.diffs.append(d)
            if len(diag.diffs) >= 2:
                prev = diag.diffs[-2]
                diag.ratios.append(d / prev if prev > 0 else 0.0)
            U = V
            diag.sup_norms.append(float(np.max(np.abs(U))))
            if d <= tol:
                diag.converged = True
                break
    sup = diag.sup_norms[-1]
    diag.contraction_budget = sup ** (spec.p - 1) * E_a(grid.T, spec.R, spec.a)
    if not diag.converged:
        if diag.ratios and diag.ratios[-1] >= 1:
            raise NotConverged(
                f"no contraction after {diag.iterations} iterations "
                f"(last ratio {diag.ratios[-1]:.3g})",
                diag,
            )
        log.warning("picard_solve stopped at max_iter=%d, diff %.3g", max_iter, diag.diffs[-1])
    return Field(grid, U), diag


def _endpoint_solve(b, c, p, max_steps, tol):
    # U = b + c |U|^p per node by fixed-point iteration; returns (U, converged)
    V = b.copy()
    conv = np.zeros(b.shape, dtype=bool)
    for _ in range(max_steps):
        Vn = b + c * np.abs(V) ** p
        conv = np.abs(Vn - V) <= tol * np.maximum(1.0, np.abs(Vn))
        V = Vn
        if conv.all():
            return V, conv
    return V, conv


def march_solve(
    spec: ProblemSpec,
    grid: CharGrid,
    blowup_threshold: float = DEFAULT_THRESHOLD,
    keep_field: bool = True,
    fp_steps: int = 50,
    fp_tol: float = 1e-13,
) -> tuple[Field, Optional[float]]:
    """Causal solve, one time level at a time.

    The trapezoid endpoint at ``s = t`` involves the node's own value; it is
    resolved per node by fixed-point iteration. Where that fails to converge
    the explicit predictor ``b + c|b|^p`` is used. The solve stops at the
    first level whose sup exceeds ``blowup_threshold`` (or is not finite) and
    reports that time.
    """
    if blowup_threshold <= 0:
        raise ValueError("blowup_threshold must be positive")
    h, p, eps = grid.h, spec.p, spec.epsilon
    W = grid.width
    x = grid.x
    w = weight(spec.a, x)
    q = 0.25 * h
    # state padded by one ghost column on each side
    U = np.zeros(W + 2)
    F = np.zeros(W + 2)
    Ap = np.zeros(W + 2)
    Am = np.zeros(W + 2)
    sl = grid.active_slice(0)
    U[sl.start + 1 : sl.stop + 1] = eps * dalembert.u0_t(spec, x[sl], 0.0)
    F[1:-1] = np.abs(U[1:-1]) ** p * w
    rows = [U[1:-1].copy()] if keep_field else None
    sups = [float(np.max(np.abs(U)))]
    blowup_time = None
    outside = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, grid.nt + 1):
            t = n * h
            sl = grid.active_slice(n)
            lo, hi = sl.start, sl.stop
            Fr, Fl = F[lo + 2 : hi + 2], F[lo:hi]
            Apr, Aml = Ap[lo + 2 : hi + 2], Am[lo:hi]
            b = eps * dalembert.u0_t(spec, x[lo:hi], t) + Apr + Aml + q * (Fr + Fl)
            c = 2 * q * w[lo:hi]
            V, conv = _endpoint_solve(b, c, p, fp_steps, fp_tol)
            if not conv.all():
                V = np.where(conv, V, b + c * np.abs(b) ** p)
            Fn = np.abs(V) ** p * w[lo:hi]
            new_Ap = Apr + q * (Fr + Fn)
            new_Am = Aml + q * (Fl + Fn)
            s = float(np.max(np.abs(V)))
            if not np.isfinite(s) or s > blowup_threshold:
                blowup_time = t
                break
            U[lo + 1 : hi + 1] = V
            F[lo + 1 : hi + 1] = Fn
            Ap[lo + 1 : hi + 1] = new_Ap
            Am[lo + 1 : hi + 1] = new_Am
            sups.append(s)
            if keep_field:
                rows.append(U[1:-1].copy())
            else:
                # the only written columns outside |x| <= t + R are the ring |j - I| = n + K + 1
                ring = n + grid.K + 1
                if ring <= grid.I:
                    outside = max(outside, abs(U[grid.I - ring + 1]), abs(U[grid.I + ring + 1]))
    values = np.array(rows) if keep_field else None
    out = Field(grid, values, level_sup=np.array(sups), blowup_time=blowup_time,
                outside_sup=None if keep_field else outside)
    return out, blowup_time


def reconstruct_w(spec: ProblemSpec, U: Field) -> Field:
    """``w(x, t) = int_0^t U(x, s) ds + eps f(x)`` by per-column trapezoid."""
    w = cumulative_trapezoid(U.values, dx=U.grid.h, axis=0, initial=0.0)
    w += spec.epsilon * spec.data.f(U.grid.x)[None, :]
    return Field(U.grid, w, blowup_time=U.blowup_time)


def pde_residual(spec: ProblemSpec, w: Field) -> float:
    """Max over interior nodes of ``|w_tt - w_xx - |w_t|^p weight|``, centered differences."""
    v = w.values
    if v.shape[0] < 3 or v.shape[1] < 3:
        raise ValueError("pde_residual needs at least 3 time levels and 3 columns")
    h = w.grid.h
    mid = v[1:-1, 1:-1]
    w_tt = (v[2:, 1:-1] - 2 * mid + v[:-2, 1:-1]) / h**2
    w_xx = (v[1:-1, 2:] - 2 * mid + v[1:-1, :-2]) / h**2
    w_t = (v[2:, 1:-1] - v[:-2, 1:-1]) / (2 * h)
    src = np.abs(w_t) ** spec.p * weight(spec.a, w.grid.x[1:-1])[None, :]
    return float(np.max(np.abs(w_tt - w_xx - src)))
