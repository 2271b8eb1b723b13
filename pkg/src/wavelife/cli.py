"""Command-line front end.

Exit status: 0 success, 1 scientific failure (e.g. ``fit --strict`` over its
bound, a failed self-test), 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .apriori import verify_apriori
from .blowup import blowup_time_closed, ode_integrate
from .config import ConfigError, load_config
from .fdm import compare_solvers
from .lifespan import LifespanTable, fit_exp_law, fit_power_law, sweep
from .model import build_grid
from .picard import NotConverged, march_solve, pde_residual, picard_solve, reconstruct_w
from .svgplot import line_chart

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _g17(v: float) -> str:
    return f"{v:.17g}"


def _write(path: Path, text: str, manifest: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    manifest.setdefault("outputs", {})[path.name] = hashlib.sha256(text.encode()).hexdigest()


def _write_manifest(path: Path, manifest: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _manifest(command: str, config=None, seed: int = 0, **extra) -> dict:
    m = {"command": command, "version": __version__, "seed": seed, "started": time.time()}
    if config is not None:
        m["config"] = config
    m.update(extra)
    return m


def _finish(m: dict, path: Path) -> None:
    m["elapsed_s"] = round(time.time() - m.pop("started"), 6)
    _write_manifest(path, m)


def _beside(path: Path) -> Path:
    """Manifest path for a single-file output: ``table.csv`` -> ``table.manifest.json``."""
    return path.with_suffix(".manifest.json")


def cmd_solve(args) -> int:
    cfg = load_config(args.config)
    spec = cfg.spec
    grid = build_grid(cfg.T, spec.R, cfg.h)
    out = Path(args.out)
    m = _manifest("solve", cfg.raw, cfg.seed)
    status = EXIT_OK
    if cfg.solver["method"] == "picard":
        try:
            U, diag = picard_solve(spec, grid, cfg.solver["tol"], cfg.solver["max_iter"])
        except NotConverged as err:
            print(f"picard did not converge: {err}", file=sys.stderr)
            _write(out / "picard.csv", err.diagnostics.to_csv(), m)
            _finish(m, out / "manifest.json")
            return EXIT_FAIL
        _write(out / "picard.csv", diag.to_csv(), m)
        blowup = None
    else:
        U, blowup = march_solve(spec, grid, cfg.solver["threshold"])
    stride = args.stride or cfg.stride
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "x", "u_t"])
    vals = U.values
    for n in range(0, vals.shape[0], stride):
        for j in range(0, grid.width, stride):
            w.writerow([_g17(n * grid.h), _g17(grid.x[j]), _g17(vals[n, j])])
    _write(out / "field.csv", buf.getvalue(), m)
    residual = pde_residual(spec, reconstruct_w(spec, U)) if vals.shape[0] >= 3 else float("nan")
    summary = io.StringIO()
    sw = csv.writer(summary, lineterminator="\n")
    sw.writerow(["levels", "h", "sup_ut", "residual", "blowup_time", "outside_cone_max"])
    sw.writerow([vals.shape[0], _g17(grid.h), _g17(U.sup_norm), _g17(residual),
                 "" if blowup is None else _g17(blowup), _g17(U.outside_cone_max())])
    _write(out / "residual.csv", summary.getvalue(), m)
    _finish(m, out / "manifest.json")
    print(f"levels={vals.shape[0]} sup|u_t|={U.sup_norm:.6g} residual={residual:.3g}"
          + ("" if blowup is None else f" blowup_time={blowup:.6g}"))
    return status


def _parse_eps(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise ConfigError(f"--eps must be a comma-separated list of numbers, got {text!r}") from None


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    eps = _parse_eps(args.eps)
    T_max = args.T_max if args.T_max is not None else cfg.T
    jobs = args.jobs or os.cpu_count() or 1
    try:
        table = sweep(cfg.spec, eps, args.h or cfg.h, cfg.solver["threshold"], T_max, jobs=jobs)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    out = Path(args.out)
    m = _manifest("sweep", cfg.raw, cfg.seed, epsilons=eps, T_max=T_max)
    _write(out, table.to_csv(), m)
    _finish(m, _beside(out))
    for r in table.rows:
        tag = "error: " + r.error if r.error else ("global" if r.global_flag else _g17(r.T_num))
        print(f"eps={r.epsilon:g} T={tag}")
    return EXIT_OK


def cmd_fit(args) -> int:
    try:
        table = LifespanTable.from_csv(Path(args.infile).read_text())
    except (OSError, ValueError) as err:
        raise ConfigError(str(err)) from None
    try:
        res = fit_power_law(table, args.p, args.a) if args.law == "power" else fit_exp_law(table, args.p or 2.0)
    except ValueError as err:
        print(f"fit failed: {err}", file=sys.stderr)
        return EXIT_FAIL
    print(f"law={res.law} slope={res.slope:.6g} intercept={res.intercept:.6g} residual={res.residual:.3g}"
          + ("" if res.target is None else f" target={res.target:.6g}")
          + ("" if res.spread is None else f" spread={res.spread:.6g}"))
    rows = table.finite()
    le = [math.log(r.epsilon) for r in rows]
    lT = [math.log(r.T_num) for r in rows]
    prefix = Path(args.out_prefix) if args.out_prefix else Path(args.infile).with_suffix("")
    m = _manifest("fit", {"in": args.infile, "law": args.law})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["log_eps", "log_T", "log_T_fit"])
    yfit = [res.slope * x + res.intercept for x in le] if res.law == "power" else \
        [math.exp(res.slope * x + res.intercept) for x in le]
    for x, y, yf in zip(le, lT, yfit):
        w.writerow([_g17(x), _g17(y), _g17(yf)])
    _write(prefix.with_name(prefix.name + "_fit.csv"), buf.getvalue(), m)
    eps = [r.epsilon for r in rows]
    Ts = [r.T_num for r in rows]
    svg = line_chart([("measured", eps, Ts), ("fit", eps, [math.exp(v) for v in yfit])],
                     xlabel="epsilon", ylabel="T(epsilon)", title=f"{res.law} law, slope {res.slope:.3f}",
                     logx=True, logy=True)
    _write(prefix.with_name(prefix.name + "_fit.svg"), svg, m)
    _finish(m, _beside(prefix.with_name(prefix.name + "_fit.csv")))
    if args.strict:
        if args.max_residual is not None and res.residual > args.max_residual:
            return EXIT_FAIL
        if args.slope_tol is not None and res.target is not None and res.slope_rel_error > args.slope_tol:
            return EXIT_FAIL
    return EXIT_OK


def cmd_verify_apriori(args) -> int:
    seed = int(os.environ.get("WAVELIFE_SEED", args.seed))
    rep = verify_apriori(args.a, args.T, args.R, args.samples, seed, p=args.p, h=args.h)
    text = "a,T,samples,worst_ratio,x,t\n" + ",".join(
        [_g17(rep.a), _g17(rep.T), str(rep.samples), _g17(rep.worst_ratio),
         _g17(rep.worst_location[0]), _g17(rep.worst_location[1])]) + "\n"
    if args.out:
        m = _manifest("verify-apriori", vars_clean(args), seed)
        _write(Path(args.out), text, m)
        _finish(m, _beside(Path(args.out)))
    sys.stdout.write(text)
    return EXIT_OK


def vars_clean(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def _blowup_line(p, a, R, geps, c, ode_check) -> list[str]:
    X = blowup_time_closed(p, a, R, geps, c)
    fields = [_g17(p), _g17(a), _g17(R), _g17(geps), "global" if X is None else _g17(X)]
    if ode_check:
        sol = ode_integrate(p, a, R, geps, c=c)
        fields.append("global" if sol.blowup_x is None else _g17(sol.blowup_x))
    return fields


def cmd_blowup_time(args) -> int:
    if args.batch:
        try:
            rows = list(csv.DictReader(Path(args.batch).open()))
            out = io.StringIO()
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["p", "a", "R", "geps", "X"] + (["X_ode"] if args.ode_check else []))
            for r in rows:
                w.writerow(_blowup_line(float(r["p"]), float(r["a"]), float(r["R"]), float(r["geps"]),
                                        args.c, args.ode_check))
        except (OSError, KeyError, ValueError) as err:
            raise ConfigError(f"batch file: {err}") from None
        sys.stdout.write(out.getvalue())
        return EXIT_OK
    if None in (args.p, args.a, args.geps):
        raise ConfigError("blowup-time needs --p, --a and --geps (or --batch)")
    fields = _blowup_line(args.p, args.a, args.R, args.geps, args.c, args.ode_check)
    print(fields[4])
    if args.ode_check:
        print(f"ode: {fields[5]}")
    return EXIT_OK


def cmd_compare_oracle(args) -> int:
    cfg = load_config(args.config)
    grid = build_grid(cfg.T, cfg.spec.R, cfg.h)
    rep = compare_solvers(cfg.spec, grid, cfg.solver["threshold"])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "ut_diff"])
    for n, d in enumerate(rep.ut_diff_per_level):
        w.writerow([_g17(n * grid.h), _g17(d)])
    fmt = lambda v: "" if v is None else _g17(v)
    summary = (f"u_diff,ut_diff,march_blowup,fdm_blowup,outcome\n"
               f"{_g17(rep.u_diff)},{_g17(rep.ut_diff)},{fmt(rep.march_blowup)},{fmt(rep.fdm_blowup)},{rep.outcome}\n")
    if args.out:
        out = Path(args.out)
        m = _manifest("compare-oracle", cfg.raw, cfg.seed)
        _write(out / "per_level.csv", buf.getvalue(), m)
        _write(out / "summary.csv", summary, m)
        _finish(m, out / "manifest.json")
    sys.stdout.write(summary)
    return EXIT_OK


def selftest() -> int:
    from .apriori import E_a, I_minus, I_plus
    from .model import ProblemSpec, default_bump

    bump = default_bump(1.0)
    spec0 = ProblemSpec(2.0, 0.0, 0.0)
    grid = build_grid(1.0, 1.0, 0.1)
    checks = [
        ("default_bump peak", lambda: bump.g(0.0) == 1.0),
        ("default_bump outside support", lambda: bump.g(1.5) == 0.0),
        ("total_g = 256/315", lambda: abs(bump.total_g - 256 / 315) < 1e-14),
        ("grid levels", lambda: build_grid(1, 1, 0.5).nt == 2),
        ("E_a(2,1,-1) = 4", lambda: E_a(2, 1, -1) == 4.0),
        ("E_a(T,1,0.5) = 1", lambda: E_a(7.0, 1, 0.5) == 1.0),
        ("I_+(x,0) = 0", lambda: I_plus(0.3, 0.0, 0.0) == 0.0),
        ("I symmetry", lambda: I_plus(-0.4, 2.0, 0.3) == I_minus(0.4, 2.0, 0.3)),
        ("eps=0 march is zero", lambda: march_solve(spec0, grid)[0].sup_norm == 0.0),
        ("eps=0 picard one iteration", lambda: picard_solve(spec0, grid)[1].iterations == 1),
        ("blow-up time 11", lambda: abs(blowup_time_closed(2, -1, 1, 0.1) - 11) < 1e-12),
    ]
    failed = 0
    for name, check in checks:
        try:
            ok = bool(check())
        except Exception as err:  # report and keep going
            ok, name = False, f"{name} ({err})"
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wavelife", description=__doc__.splitlines()[0])
    ap.add_argument("--selftest", action="store_true", help="run the built-in sanity checks and exit")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command")

    s = sub.add_parser("solve", help="solve one configuration and write the u_t field")
    s.add_argument("--config", required=True)
    s.add_argument("--out", default="out")
    s.add_argument("--stride", type=int, default=None)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("sweep", help="measure lifespans over a list of epsilons")
    s.add_argument("--config", required=True)
    s.add_argument("--eps", required=True, help="comma-separated epsilons")
    s.add_argument("--out", default="table.csv")
    s.add_argument("--h", type=float, default=None)
    s.add_argument("--T-max", dest="T_max", type=float, default=None)
    s.add_argument("--jobs", type=int, default=None)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("fit", help="fit a lifespan table to a power or exponential law")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--law", choices=["power", "exp"], required=True)
    s.add_argument("--p", type=float, default=None)
    s.add_argument("--a", type=float, default=None)
    s.add_argument("--out-prefix", default=None)
    s.add_argument("--strict", action="store_true")
    s.add_argument("--max-residual", type=float, default=None)
    s.add_argument("--slope-tol", type=float, default=None)
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("verify-apriori", help="empirical constant of the a-priori bound")
    s.add_argument("--a", type=float, required=True)
    s.add_argument("--T", type=float, required=True)
    s.add_argument("--R", type=float, default=1.0)
    s.add_argument("--p", type=float, default=2.0)
    s.add_argument("--h", type=float, default=0.05)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_verify_apriori)

    s = sub.add_parser("blowup-time", help="blow-up abscissa of the comparison ODE")
    s.add_argument("--p", type=float)
    s.add_argument("--a", type=float)
    s.add_argument("--R", type=float, default=1.0)
    s.add_argument("--geps", type=float)
    s.add_argument("--c", type=float, default=1.0)
    s.add_argument("--ode-check", action="store_true")
    s.add_argument("--batch", default=None, help="CSV with columns p,a,R,geps")
    s.set_defaults(func=cmd_blowup_time)

    s = sub.add_parser("compare-oracle", help="march solver vs leapfrog finite differences")
    s.add_argument("--config", required=True)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_compare_oracle)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.selftest:
        return selftest()
    if not getattr(args, "func", None):
        ap.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
