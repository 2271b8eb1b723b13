"""Numerical lifespan ``T(eps)``, epsilon sweeps and scaling-law fits."""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .model import ProblemSpec, build_grid
from .picard import DEFAULT_THRESHOLD, march_solve

log = logging.getLogger(__name__)

MAX_LEVEL_WIDTH = 50_000_000
CSV_COLUMNS = ["epsilon", "T_num", "global_flag", "h", "threshold"]


@dataclass(frozen=True)
class Global:
    """No blow-up detected up to ``T_max``."""

    T_max: float
    sup: float = float("nan")


def measure_lifespan(
    spec: ProblemSpec,
    h: float,
    threshold: float = DEFAULT_THRESHOLD,
    T_max: float = 100.0,
    with_field: bool = False,
) -> Union[float, Global]:
    """First time the sup of ``u_t`` crosses ``threshold``, else ``Global(T_max)``.

    With ``with_field`` the sup-only :class:`Field` (level sups and the
    outside-cone monitor) is returned alongside, as ``(result, field)``.
    """
    if spec.epsilon == 0:
        res = Global(T_max, 0.0)
        return (res, None) if with_field else res
    # only one level is held in memory; the width is what has to fit
    grid = build_grid(T_max, spec.R, h, max_nodes=None)
    if grid.width > MAX_LEVEL_WIDTH:
        raise ValueError(f"T_max={T_max} with h={h} needs {grid.width} columns per level "
                         f"(limit {MAX_LEVEL_WIDTH}); increase h or reduce T_max")
    U, tb = march_solve(spec, grid, threshold, keep_field=False)
    res = Global(grid.T, U.sup_norm) if tb is None else tb
    return (res, U) if with_field else res


def threshold_sensitivity(spec: ProblemSpec, h: float, T_max: float,
                          low: float = 1e4, high: float = 1e8) -> float:
    """Relative lifespan shift between two blow-up thresholds."""
    t_lo = measure_lifespan(spec, h, low, T_max)
    t_hi = measure_lifespan(spec, h, high, T_max)
    if isinstance(t_lo, Global) or isinstance(t_hi, Global):
        raise ValueError("threshold sensitivity needs a finite lifespan at both thresholds")
    return abs(t_hi - t_lo) / t_lo


@dataclass
class LifespanRow:
    epsilon: float
    T_num: float
    global_flag: bool
    h: float
    threshold: float
    solver: str = "march"
    error: Optional[str] = None
    outside_sup: float = 0.0  # support monitor, not written to CSV


@dataclass
class LifespanTable:
    rows: list[LifespanRow] = field(default_factory=list)

    def __post_init__(self):
        eps = [r.epsilon for r in self.rows]
        if len(set(eps)) != len(eps):
            raise ValueError("duplicate epsilon in lifespan table")
        d = np.diff(eps)
        if len(d) and not (np.all(d > 0) or np.all(d < 0)):
            raise ValueError("epsilons must be strictly monotone")

    def finite(self) -> list[LifespanRow]:
        return [r for r in self.rows if not r.global_flag and r.error is None]

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(CSV_COLUMNS)
        for r in self.rows:
            if r.error is not None:
                continue
            out.writerow([f"{r.epsilon:.17g}", f"{r.T_num:.17g}", int(r.global_flag),
                          f"{r.h:.17g}", f"{r.threshold:.17g}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "LifespanTable":
        reader = csv.DictReader(io.StringIO(text))
        missing = set(CSV_COLUMNS) - set(reader.fieldnames or [])
        if missing:
            raise ValueError(f"lifespan CSV missing columns: {sorted(missing)}")
        rows = [LifespanRow(float(r["epsilon"]), float(r["T_num"]), bool(int(r["global_flag"])),
                            float(r["h"]), float(r["threshold"])) for r in reader]
        return cls(rows)


def _row(args) -> LifespanRow:
    spec, eps, h, threshold, T_max = args
    try:
        res, U = measure_lifespan(spec.replace(epsilon=eps), h, threshold, T_max, with_field=True)
    except Exception as err:  # recorded per row; the sweep continues
        log.warning("lifespan run eps=%g failed: %s", eps, err)
        return LifespanRow(eps, float("nan"), False, h, threshold, error=str(err))
    outside = 0.0 if U is None else U.outside_cone_max()
    if isinstance(res, Global):
        return LifespanRow(eps, res.T_max, True, h, threshold, outside_sup=outside)
    return LifespanRow(eps, float(res), False, h, threshold, outside_sup=outside)


def sweep(
    base_spec: ProblemSpec,
    epsilons: Sequence[float],
    h: float,
    threshold: float = DEFAULT_THRESHOLD,
    T_max: float = 100.0,
    jobs: int = 1,
) -> LifespanTable:
    """One lifespan measurement per epsilon; rows keep the input order."""
    epsilons = [float(e) for e in epsilons]
    if not epsilons:
        raise ValueError("epsilons must be nonempty")
    if len(set(epsilons)) != len(epsilons):
        raise ValueError("duplicate epsilon in sweep")
    tasks = [(base_spec, e, h, threshold, T_max) for e in epsilons]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_row, tasks))
    else:
        rows = [_row(t) for t in tasks]
    return LifespanTable(rows)


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residual: float
    law: str
    target: Optional[float] = None
    spread: Optional[float] = None
    invariant: Optional[tuple[float, ...]] = None

    @property
    def slope_rel_error(self) -> Optional[float]:
        if self.target is None:
            return None
        return abs(self.slope - self.target) / abs(self.target)


def _lsq(x, y):
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.max(np.abs(y - (slope * x + intercept))))
    return float(slope), float(intercept), resid


def _finite_rows(table: LifespanTable):
    rows = table.finite()
    if not rows:
        raise ValueError("no finite lifespans in table (all global); use an exp or global verdict")
    if len(rows) < 3:
        raise ValueError(f"fit needs at least 3 finite rows, got {len(rows)}")
    return rows


def fit_power_law(table: LifespanTable, p: Optional[float] = None, a: Optional[float] = None) -> FitResult:
    """Least squares of ``log T`` on ``log eps``; target slope ``-(p-1)/(-a)`` if given."""
    rows = _finite_rows(table)
    le = np.log([r.epsilon for r in rows])
    lT = np.log([r.T_num for r in rows])
    slope, intercept, resid = _lsq(le, lT)
    target = -(p - 1) / (-a) if p is not None and a is not None and a < 0 else None
    return FitResult(slope, intercept, resid, "power", target=target)


def fit_exp_law(table: LifespanTable, p: float) -> FitResult:
    """Least squares of ``log log T`` on ``log eps``, target slope ``-(p-1)``.

    ``invariant`` is the sequence ``eps^(p-1) log T`` and ``spread`` its
    max/min ratio.
    """
    rows = _finite_rows(table)
    if any(r.T_num <= 1 for r in rows):
        raise ValueError("exp-law fit needs every T_num > 1")
    eps = np.array([r.epsilon for r in rows])
    logT = np.log([r.T_num for r in rows])
    slope, intercept, resid = _lsq(np.log(eps), np.log(logT))
    inv = eps ** (p - 1) * logT
    return FitResult(slope, intercept, resid, "exp", target=-(p - 1),
                     spread=float(inv.max() / inv.min()), invariant=tuple(float(v) for v in inv))
