"""YAML run configuration.

Schema (``data`` may be ``default_bump`` or inline pieces)::

    p: 2                 # required
    a: -1                # required
    epsilon: 0.3         # required
    R: 1                 # default 1
    seed: 0              # default 0; WAVELIFE_SEED overrides
    data: default_bump   # or {f: [[x0, x1, [c0, c1, ...]], ...], g: [...]}
    grid:
      h: 0.01            # required
      T: 10              # required
    solver:
      method: march      # march | picard
      threshold: 1.0e6
      tol: 1.0e-10
      max_iter: 200
    output:
      stride: 1

Inline piece coefficients are in increasing powers of ``x``; omitted ``f`` or
``g`` means zero.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any

import yaml

from .model import BumpData, PiecewisePolynomial, ProblemSpec, default_bump


class ConfigError(ValueError):
    pass


TOP_KEYS = {"p", "a", "epsilon", "R", "seed", "data", "grid", "solver", "output"}
SOLVER_DEFAULTS = {"method": "march", "threshold": 1e6, "tol": 1e-10, "max_iter": 200}


@dataclass
class RunConfig:
    spec: ProblemSpec
    h: float
    T: float
    seed: int = 0
    solver: dict[str, Any] = field(default_factory=lambda: dict(SOLVER_DEFAULTS))
    stride: int = 1
    raw: dict[str, Any] = field(default_factory=dict)


def _number(section: dict, key: str, where: str, default=None, required=True) -> float:
    if key not in section:
        if required and default is None:
            raise ConfigError(f"missing required key '{where}{key}'")
        return default
    try:
        return float(section[key])
    except (TypeError, ValueError):
        raise ConfigError(f"key '{where}{key}' must be a number, got {section[key]!r}") from None


def _pieces(spec, name: str) -> PiecewisePolynomial:
    if spec is None:
        return PiecewisePolynomial.zero()
    try:
        return PiecewisePolynomial([(float(x0), float(x1), [float(c) for c in coeffs])
                                    for x0, x1, coeffs in spec])
    except (TypeError, ValueError) as err:
        raise ConfigError(f"data.{name}: expected a list of [x0, x1, [coefficients]] ({err})") from None


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as err:
        mark = getattr(err, "problem_mark", None)
        loc = f"{source}:{mark.line + 1}:{mark.column + 1}" if mark else source
        raise ConfigError(f"{loc}: {getattr(err, 'problem', None) or err}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{source}: top level must be a mapping")
    unknown = set(raw) - TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(sorted(unknown))}")

    p = _number(raw, "p", "")
    a = _number(raw, "a", "")
    eps = _number(raw, "epsilon", "")
    R = _number(raw, "R", "", default=1.0)
    data_raw = raw.get("data", "default_bump")
    if data_raw == "default_bump":
        try:
            data = default_bump(R)
        except ValueError as err:
            raise ConfigError(str(err)) from None
    elif isinstance(data_raw, dict):
        extra = set(data_raw) - {"f", "g"}
        if extra:
            raise ConfigError(f"unknown key(s) in data: {', '.join(sorted(extra))}")
        data = BumpData(_pieces(data_raw.get("f"), "f"), _pieces(data_raw.get("g"), "g"))
    else:
        raise ConfigError("data must be 'default_bump' or a mapping with f/g pieces")

    grid = raw.get("grid")
    if not isinstance(grid, dict):
        raise ConfigError("missing required key 'grid' (with grid.h and grid.T)")
    h = _number(grid, "h", "grid.")
    T = _number(grid, "T", "grid.")

    solver = dict(SOLVER_DEFAULTS)
    for k, v in (raw.get("solver") or {}).items():
        if k not in SOLVER_DEFAULTS:
            raise ConfigError(f"unknown key 'solver.{k}'")
        solver[k] = v if k == "method" else _number({k: v}, k, "solver.")
    if solver["method"] not in ("march", "picard"):
        raise ConfigError("solver.method must be 'march' or 'picard'")
    solver["max_iter"] = int(solver["max_iter"])

    stride = int(_number(raw.get("output") or {}, "stride", "output.", default=1.0))
    seed = int(_number(raw, "seed", "", default=0.0))
    env_seed = os.environ.get("WAVELIFE_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            raise ConfigError(f"WAVELIFE_SEED must be an integer, got {env_seed!r}") from None

    try:
        spec = ProblemSpec(p=p, a=a, epsilon=eps, R=R, data=data)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    return RunConfig(spec=spec, h=h, T=T, seed=seed, solver=solver, stride=max(1, stride), raw=raw)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from None
    return parse_config(text, source=path)
