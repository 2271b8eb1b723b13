"""Domain types: problem parameters, compactly supported initial data, the
characteristic space-time mesh and nodal fields on it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial

# Stored-node guard for a dense grid.
MAX_NODES = 2_000_000_000


class PiecewisePolynomial:
    """Piecewise polynomial profile, identically zero outside its pieces.

    ``pieces`` is a sequence of ``(x0, x1, coeffs)`` with ``coeffs`` in
    increasing powers of ``x`` (not of ``x - x0``). Pieces must be sorted and
    non-overlapping. On a shared break point the right-hand piece wins, except
    at the last break which belongs to the last piece.
    """

    def __init__(self, pieces: Sequence[tuple[float, float, Sequence[float]]]):
        cleaned = []
        prev_end = -math.inf
        for x0, x1, coeffs in pieces:
            x0, x1 = float(x0), float(x1)
            if not x1 > x0:
                raise ValueError(f"empty piece [{x0}, {x1}]")
            if x0 < prev_end:
                raise ValueError("pieces must be sorted and non-overlapping")
            poly = coeffs if isinstance(coeffs, Polynomial) else Polynomial(np.asarray(coeffs, float))
            cleaned.append((x0, x1, poly))
            prev_end = x1
        self.pieces: list[tuple[float, float, Polynomial]] = cleaned

    @classmethod
    def zero(cls) -> "PiecewisePolynomial":
        return cls([])

    @property
    def support(self) -> tuple[float, float]:
        if not self.pieces:
            return (0.0, 0.0)
        return (self.pieces[0][0], self.pieces[-1][1])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        last = len(self.pieces) - 1
        for k, (x0, x1, poly) in enumerate(self.pieces):
            mask = (x >= x0) & ((x < x1) if k < last else (x <= x1))
            if np.any(mask):
                out[mask] = poly(x[mask])
        return out if out.ndim else float(out)

    def derivative(self, m: int = 1) -> "PiecewisePolynomial":
        return PiecewisePolynomial([(x0, x1, poly.deriv(m)) for x0, x1, poly in self.pieces])

    def running_integral(self):
        """Return ``x -> int_{-inf}^x self``, exact on every piece."""
        starts = []
        acc = 0.0
        antis = []
        for x0, x1, poly in self.pieces:
            anti = poly.integ(lbnd=x0)
            starts.append(acc)
            antis.append(anti)
            acc += float(anti(x1))
        total = acc
        pieces = self.pieces

        def integral(x):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            if pieces:
                out[x >= pieces[-1][1]] = total
            for (x0, x1, _), anti, base in zip(pieces, antis, starts):
                mask = (x >= x0) & (x < x1)
                if np.any(mask):
                    out[mask] = base + anti(x[mask])
            # gaps between pieces carry the accumulated value
            for k in range(len(pieces) - 1):
                gap = (x >= pieces[k][1]) & (x < pieces[k + 1][0])
                if np.any(gap):
                    out[gap] = starts[k + 1]
            return out if out.ndim else float(out)

        return integral, total


@dataclass(frozen=True)
class BumpData:
    """Initial data ``(f, g)`` with everything the solvers evaluate.

    ``f`` must be C^2 and ``g`` C^1; both are supported in ``[-R, R]``.
    ``f``, ``g`` may be any profile exposing ``__call__`` and ``derivative``;
    the running integral of ``g`` is taken from ``g.running_integral()``.
    """

    f: PiecewisePolynomial
    g: PiecewisePolynomial
    f1: PiecewisePolynomial = field(init=False, repr=False)
    f2: PiecewisePolynomial = field(init=False, repr=False)
    g1: PiecewisePolynomial = field(init=False, repr=False)
    g_antideriv: object = field(init=False, repr=False)
    total_g: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "f1", self.f.derivative(1))
        object.__setattr__(self, "f2", self.f.derivative(2))
        object.__setattr__(self, "g1", self.g.derivative(1))
        anti, total = self.g.running_integral()
        object.__setattr__(self, "g_antideriv", anti)
        object.__setattr__(self, "total_g", float(total))

    def __reduce__(self):
        # derived fields hold closures; rebuild them on unpickling
        return (type(self), (self.f, self.g))

    def support_radius(self) -> float:
        lo = min(self.f.support[0], self.g.support[0])
        hi = max(self.f.support[1], self.g.support[1])
        return max(-lo, hi, 0.0)


def default_bump(R: float = 1.0) -> BumpData:
    """``f = 0`` and ``g(x) = (1 - (x/R)^2)^4`` on ``[-R, R]``."""
    if R < 1:
        raise ValueError(f"support radius R must be >= 1, got {R}")
    base = Polynomial([1.0, 0.0, -1.0 / R**2]) ** 4
    g = PiecewisePolynomial([(-R, R, base)])
    return BumpData(PiecewisePolynomial.zero(), g)


def scaled(data: BumpData, factor: float) -> BumpData:
    """Data ``(factor f, factor g)``."""
    def scale(pp):
        return PiecewisePolynomial([(x0, x1, poly * factor) for x0, x1, poly in pp.pieces])
    return BumpData(scale(data.f), scale(data.g))


@dataclass(frozen=True)
class DataNorms:
    M: float
    N: float


def data_norms(data: BumpData, R: float, h: float = 0.01) -> DataNorms:
    """Sup norms of the data sampled at spacing ``h/4`` on ``[-R, R]``.

    This is a sampling approximation; for the polynomial bumps its error is
    O(h^2).
    """
    n = int(math.ceil(2 * R / (h / 4))) + 1
    xs = np.linspace(-R, R, n)
    sup = lambda prof: float(np.max(np.abs(prof(xs))))
    f1, f2, g0, g1 = sup(data.f1), sup(data.f2), sup(data.g), sup(data.g1)
    return DataNorms(M=f1 + f2 + g0 + g1, N=f1 + g0)


@dataclass(frozen=True)
class ProblemSpec:
    p: float
    a: float
    epsilon: float
    R: float = 1.0
    data: BumpData = None  # type: ignore[assignment]

    def __post_init__(self):
        if not self.p > 1:
            raise ValueError(f"p must be > 1, got {self.p}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.R < 1:
            raise ValueError(f"R must be >= 1, got {self.R}")
        if self.data is None:
            object.__setattr__(self, "data", default_bump(self.R))
        if self.data.support_radius() > self.R * (1 + 1e-12):
            raise ValueError("initial data must vanish for |x| > R")

    @property
    def low_regularity(self) -> bool:
        """True for 1 < p < 2, where only continuous u_t is expected."""
        return self.p < 2

    def replace(self, **changes) -> "ProblemSpec":
        kw = dict(p=self.p, a=self.a, epsilon=self.epsilon, R=self.R, data=self.data)
        kw.update(changes)
        return ProblemSpec(**kw)


@dataclass(frozen=True)
class CharGrid:
    """Uniform mesh with ``dt = dx = h`` covering the cone ``|x| <= t + R``.

    Values are stored densely on levels ``n = 0..nt`` and columns
    ``j = 0..2*I`` with ``x_j = (j - I) h``, ``I = nt + K + 1``, ``K = R/h``.
    Columns beyond the cone at a level are the ghost region and stay zero.
    """

    h: float
    nt: int
    K: int

    @property
    def T(self) -> float:
        return self.nt * self.h

    @property
    def R(self) -> float:
        return self.K * self.h

    @property
    def I(self) -> int:
        return self.nt + self.K + 1

    @property
    def width(self) -> int:
        return 2 * self.I + 1

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.width) - self.I) * self.h

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.nt + 1) * self.h

    @property
    def node_count(self) -> int:
        return (self.nt + 1) * self.width

    @property
    def cone_node_count(self) -> int:
        # nodes with |i| <= n + K + 1 (cone plus one ghost layer)
        n = np.arange(self.nt + 1)
        return int(np.sum(2 * (n + self.K + 1) + 1))

    def column(self, x: float) -> int:
        j = x / self.h + self.I
        jr = int(round(j))
        if abs(j - jr) > 1e-9 or not 0 <= jr < self.width:
            raise ValueError(f"x={x} is not a grid abscissa")
        return jr

    def level(self, t: float) -> int:
        n = t / self.h
        nr = int(round(n))
        if abs(n - nr) > 1e-9 or not 0 <= nr <= self.nt:
            raise ValueError(f"t={t} is not a grid time level")
        return nr

    def cone_mask(self) -> np.ndarray:
        """Boolean (levels, width) mask of nodes with ``|x| <= t + R``."""
        i = np.abs(np.arange(self.width) - self.I)
        n = np.arange(self.nt + 1)[:, None]
        return i[None, :] <= n + self.K

    def active_slice(self, n: int) -> slice:
        """Columns with ``|x| <= t_n + R + h`` at level ``n``."""
        half = min(n + self.K + 1, self.I)
        return slice(self.I - half, self.I + half + 1)


def build_grid(T: float, R: float, h: float, max_nodes: Optional[int] = MAX_NODES) -> CharGrid:
    """Mesh for horizon ``T``; ``h`` is snapped so it divides ``R``.

    ``max_nodes`` guards the dense storage size; pass ``None`` for solves
    that keep a single time level.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    if T < 0:
        raise ValueError("T must be nonnegative")
    K = max(1, int(round(R / h)))
    if abs(K * h - R) > 1e-12 * R:
        snapped = R / K
        warnings.warn(f"h={h} does not divide R={R}; snapped to {snapped}")
        h = snapped
    ratio = T / h
    nt = int(round(ratio)) if abs(ratio - round(ratio)) < 1e-9 else int(math.ceil(ratio))
    grid = CharGrid(h=float(h), nt=nt, K=K)
    if max_nodes is not None and grid.node_count > max_nodes:
        raise ValueError(
            f"grid with T={T}, R={R}, h={h} needs {grid.node_count:.3g} nodes "
            f"(limit {max_nodes:.1g}); increase h or reduce T"
        )
    return grid


@dataclass
class Field:
    """Nodal values on a :class:`CharGrid`.

    ``values`` has one row per computed level (fewer than ``grid.nt + 1`` if
    the solve stopped at blow-up) or is ``None`` when only the per-level sup
    norms were kept. In that case ``outside_sup`` carries the largest value
    the solver saw outside the cone.
    """

    grid: CharGrid
    values: Optional[np.ndarray]
    level_sup: Optional[np.ndarray] = None
    blowup_time: Optional[float] = None
    outside_sup: Optional[float] = None

    def __post_init__(self):
        if self.level_sup is None and self.values is not None:
            self.level_sup = np.max(np.abs(self.values), axis=1)

    @property
    def sup_norm(self) -> float:
        return float(np.max(self.level_sup)) if self.level_sup is not None and len(self.level_sup) else 0.0

    @property
    def levels(self) -> int:
        return len(self.level_sup)

    @property
    def blown_up(self) -> bool:
        return self.blowup_time is not None

    def at(self, x: float, t: float) -> float:
        return float(self.values[self.grid.level(t), self.grid.column(x)])

    def outside_cone_max(self) -> float:
        """Largest ``|value|`` at nodes with ``|x| > t + R`` (should be 0)."""
        if self.values is None:
            if self.outside_sup is None:
                raise ValueError("field kept neither values nor an outside-cone monitor")
            return self.outside_sup
        mask = self.grid.cone_mask()[: self.values.shape[0]]
        outside = np.abs(np.where(mask, 0.0, self.values))
        return float(outside.max()) if outside.size else 0.0
