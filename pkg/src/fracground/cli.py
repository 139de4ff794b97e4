"""Command line front end.

    fracground solve    --config run.json [--out DIR]
    fracground classify --p 2 --q 3 --c 0.1 [--L 400 --N 32768]
    fracground kernel   --sigma 1 --nu 1 [--L 400 --N 32768]
    fracground sweep    --config run.json --param c --from 0.05 --to 0.3 --steps 6 [--jobs 2]
    fracground audit    {sp4,positivity,level} ...

Exit codes: 0 success (solve: converged), 2 computed but not converged or a
check failed, 1 usage or configuration error. Output goes to ``--out``,
else ``$FRACGROUND_OUT``, else ``./fracground_out``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import io, schemas
from . import functionals as fn
from .errors import FracGroundError, ThresholdError, TrivialityError
from .functionals import ProblemSpec
from .solvers import SolverConfig, minimize_nehari, minimize_pohozaev, petviashvili
from .spectral import GridSpec, kernel, kernel_properties

log = logging.getLogger("fracground")

EXIT_OK, EXIT_USAGE, EXIT_UNCONVERGED = 0, 1, 2
DEFAULT_OUT = "fracground_out"


class ConfigError(Exception):
    pass


def out_dir(arg) -> Path:
    if arg:
        return Path(arg)
    return Path(os.environ.get("FRACGROUND_OUT") or DEFAULT_OUT)


# -- config handling --------------------------------------------------------------

def load_config(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    problems = schemas.errors("solve_config", data)
    if problems:
        raise ConfigError("\n".join(f"{path}: {p}" for p in problems))
    return data


def build(data: dict):
    try:
        spec = ProblemSpec.from_dict(data["problem"])
        grid = GridSpec.from_dict(data["grid"])
        config = SolverConfig.from_dict(data.get("solver", {}))
    except (FracGroundError, TypeError) as exc:
        raise ConfigError(str(exc)) from None
    return spec, grid, config, data.get("method", "auto")


def run_solver(spec, grid, config, method="auto"):
    if method == "auto":
        method = "pohozaev" if spec.variant == "sp3" else "nehari"
    if method == "pohozaev":
        return minimize_pohozaev(spec, grid, config)
    if method == "petviashvili":
        return petviashvili(spec, grid, config)
    return minimize_nehari(spec, grid, config)


def _explain(exc) -> str:
    if isinstance(exc, TrivialityError):
        return f"{exc} (run `fracground audit sp4` to check the lower bound on K_4)"
    if isinstance(exc, ThresholdError) and exc.c0 is not None:
        return f"{exc} [c0 = {exc.c0!r}]"
    return str(exc)


# -- commands ---------------------------------------------------------------------

def cmd_solve(args) -> int:
    spec, grid, config, method = build(load_config(args.config))
    outdir = out_dir(args.out)
    report = run_solver(spec, grid, config, method)
    path = io.write_report(outdir, report)
    print(f"wrote {path}")
    return EXIT_OK if report.converged else EXIT_UNCONVERGED


def cmd_classify(args) -> int:
    from .verify import classify

    grid = GridSpec(args.L, args.N)
    sp3_grid = GridSpec(args.sp3_L, args.sp3_N) if args.sp3_L else None
    config = SolverConfig(grad_tol=args.tol, max_iter=args.max_iter)
    report = classify(args.p, args.q, args.c, grid, config, sp3_grid=sp3_grid)
    data = report.to_dict()
    path = io.write_json(out_dir(args.out) / "classification.json", data)
    for v in report.verdicts:
        print(f"{v.name}: {v.status}")
    print(f"{report.case_label}; wrote {path}")
    failed = any(v.status == "failed" for v in report.verdicts)
    return EXIT_UNCONVERGED if failed else EXIT_OK


def cmd_kernel(args) -> int:
    grid = GridSpec(args.L, args.N)
    k = kernel(args.sigma, args.nu, grid)
    props = kernel_properties(k)
    outdir = out_dir(args.out)
    io.write_field_csv(outdir / "kernel.csv", k)
    summary = {"sigma": args.sigma, "nu": args.nu, "grid": {"L": grid.L, "N": grid.N},
               "expected_quadrature": 1.0 / args.nu, "profile_csv": "kernel.csv", **props}
    path = io.write_json(outdir / "kernel.json", summary)
    print(f"quadrature {props['quadrature']!r} (1/nu = {1.0 / args.nu!r}); wrote {path}")
    ok = props["positive"] and props["even"] and props["decreasing"]
    return EXIT_OK if ok else EXIT_UNCONVERGED


def _sweep_row(task):
    index, value, data, param, outdir = task
    data = json.loads(json.dumps(data))
    data["problem"][param] = value
    row = {"index": index, "value": value, "converged": False, "action": None,
           "nehari_value": None, "pohozaev": None, "report": None}
    try:
        spec, grid, config, method = build(data)
        if spec.variant == "sp3":
            c0 = fn.c_zero(spec.p, spec.q).c0
            if not spec.c < c0:
                return {**row, "status": "threshold-blocked", "message": f"c >= c0 = {c0!r}"}
        report = run_solver(spec, grid, config, method)
    except ThresholdError as exc:
        return {**row, "status": "threshold-blocked", "message": _explain(exc)}
    except (FracGroundError, ConfigError) as exc:
        return {**row, "status": "error", "message": _explain(exc)}
    stem = f"row{index:03d}"
    io.write_report(outdir, report, stem=stem)
    return {**row, "status": "converged" if report.converged else "unconverged",
            "converged": report.converged, "action": report.action,
            "nehari_value": report.nehari_value, "pohozaev": report.pohozaev,
            "report": f"{stem}.json"}


def cmd_sweep(args) -> int:
    data = load_config(args.config)
    if args.param not in ("c", "sigma", "p", "q"):
        raise ConfigError(f"cannot sweep {args.param!r}; choose c, sigma, p or q")
    if args.steps < 1:
        raise ConfigError("--steps must be at least 1")
    values = [float(v) for v in np.linspace(args.start, args.stop, args.steps)]
    outdir = out_dir(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    tasks = [(i, v, data, args.param, outdir) for i, v in enumerate(values)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_row, tasks))
    else:
        rows = [_sweep_row(t) for t in tasks]
    with (outdir / "summary.csv").open("w") as fh:
        fh.write(f"{args.param},status,converged,action,nehari_value,pohozaev\n")
        for r in rows:
            nums = [r["action"], r["nehari_value"], r["pohozaev"]]
            cells = ["" if v is None else io.fmt(v) for v in nums]
            fh.write(f"{io.fmt(r['value'])},{r['status']},{str(r['converged']).lower()},{','.join(cells)}\n")
    io.write_json(outdir / "sweep.json", {"param": args.param, "values": values, "rows": rows})
    for r in rows:
        print(f"{args.param}={r['value']:.6g}: {r['status']}")
    return EXIT_OK if any(r["converged"] for r in rows) else EXIT_UNCONVERGED


def cmd_audit(args) -> int:
    from . import verify

    outdir = out_dir(args.out)
    if args.kind == "sp4":
        spec = ProblemSpec(args.sigma, args.c, args.p, args.q, "sp4")
        rep = verify.sp4_triviality_audit(spec, trials=args.trials, seed=args.seed)
        result = {"kind": "sp4", "passed": rep.passed, "details": rep.to_dict()}
    else:
        if not args.config:
            raise ConfigError(f"audit {args.kind} needs --config")
        spec, grid, config, method = build(load_config(args.config))
        report = run_solver(spec, grid, config, method)
        if not report.converged:
            result = {"kind": args.kind, "passed": False, "message": "solve did not converge",
                      "details": report.scalars()}
        elif args.kind == "positivity":
            rep = verify.positivity_representation_check(report.profile, spec)
            ok = rep.positive and rep.relative_error <= max(10 * config.grad_tol, 1e-6)
            result = {"kind": "positivity", "passed": ok, "details": rep.to_dict()}
        else:
            try:
                rep = verify.ground_state_level_audit(report, trials=args.trials, seed=args.seed)
                result = {"kind": "level", "passed": True, "details": rep.to_dict()}
            except verify.AuditFailure as exc:
                result = {"kind": "level", "passed": False, "message": str(exc), "details": {}}
    path = io.write_json(outdir / f"audit_{args.kind}.json", result)
    print(f"audit {args.kind}: {'passed' if result['passed'] else 'FAILED'}; wrote {path}")
    return EXIT_OK if result["passed"] else EXIT_UNCONVERGED


# -- parser -------------------------------------------------------------------------

def _grid_flags(p, L=400.0, N=32768):
    p.add_argument("--L", type=float, default=L, help="half length of [-L, L)")
    p.add_argument("--N", type=int, default=N, help="number of grid nodes (even)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracground", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute one ground state")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("classify", help="parity classification of the sigma = 1 problem")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    _grid_flags(p)
    p.add_argument("--sp3-L", type=float, default=None, help="separate grid for the sp3 branch")
    p.add_argument("--sp3-N", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=5000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("kernel", help="dump the resolvent kernel")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    _grid_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("sweep", help="solve along a parameter range")
    p.add_argument("--config", required=True)
    p.add_argument("--param", default="c")
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("audit", help="sp4 triviality, positivity or level audits")
    p.add_argument("kind", choices=["sp4", "positivity", "level"])
    p.add_argument("--config", help="solve config (positivity, level)")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--q", type=float, default=3.0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; usage errors are 1 here
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FracGroundError as exc:
        print(f"error: {_explain(exc)}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
