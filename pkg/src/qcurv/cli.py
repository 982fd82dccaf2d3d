"""Command-line front end emitting deterministic JSON/CSV reports.

Exit codes: 0 success, 1 computation error (diagnostic on stderr),
2 usage error.  Float fields are rounded to 12 significant digits so
identical configurations serialize byte-identically.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .asymptotics import asymptotics_report
from .config import RunConfig, build_spec, context_for, load_config_file, make_grid, resolve_profile
from .curvature import decay_margin, density, q_curvature, total_alpha
from .errors import QcurvError
from .geometry import completeness_classify, defect_extrapolate
from .potential import bad_term_b, normality_residual, potential_v
from .util import dump_csv, dump_json
from .verify import run_suite

_PROFILE_HELP = "sphere:<alpha> | counterexample | file:<csv of r,u rows>"


def _even_dimension(raw: str) -> int:
    try:
        n = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dimension must be an integer, got {raw!r}")
    if n < 4 or n % 2 != 0:
        raise argparse.ArgumentTypeError(f"dimension must be even and >= 4, got {n}")
    return n


def _profile_selector(raw: str) -> str:
    ok = raw == "counterexample" or raw.startswith("file:")
    if raw.startswith("sphere:"):
        try:
            alpha = float(raw.split(":", 1)[1])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad alpha in {raw!r}")
        if not 0.0 < alpha <= 1.0 and raw != "sphere:2":
            # catalog range; the counterexample covers the supercritical case
            raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1], got {alpha}")
        ok = True
    if not ok:
        raise argparse.ArgumentTypeError(f"unknown profile {raw!r} (expected {_PROFILE_HELP})")
    return raw


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcurv",
        description=(
            "Numerical laboratory for Q-curvature of conformally flat metrics: "
            "total curvature mass, log-kernel potentials, isoperimetric defects, "
            "and asymptotic diagnostics."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_even_dimension, default=4, help="even dimension >= 4")
    common.add_argument("--profile", type=_profile_selector, default="sphere:0.5", help=_PROFILE_HELP)
    common.add_argument("--rel-tol", type=float, default=None)
    common.add_argument("--abs-tol", type=float, default=None)
    common.add_argument("--tail-cut", type=float, default=None)
    common.add_argument("--sphere-nodes", type=int, default=None)
    common.add_argument("--config", default=None, help="optional TOML file with a [quadrature] table")
    common.add_argument("--format", choices=["json", "csv"], default="json")

    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("ctx", parents=[common], help="print all dimension constants")

    p = sub.add_parser("q-curvature", parents=[common], help="pointwise Q at a radius")
    p.add_argument("--r", type=float, required=True)

    sub.add_parser("alpha", parents=[common], help="total curvature mass over c_n")

    p = sub.add_parser("decay", parents=[common], help="decay margin of Q against e^(-r^2)")
    p.add_argument("--rmin", type=float, default=3.0)
    p.add_argument("--rmax", type=float, default=12.0)
    p.add_argument("--points", type=int, default=8)

    p = sub.add_parser("potential", parents=[common], help="log-kernel potential and bad term at a radius")
    p.add_argument("--r", type=float, required=True)

    p = sub.add_parser("normality", parents=[common], help="residual of u + v = const on a grid")
    p.add_argument("--grid", default="0.5,1,2,5,10,50", help="comma-separated radii")

    p = sub.add_parser("defect", parents=[common], help="isoperimetric defect extrapolation")
    p.add_argument("--rmin", type=float, default=10.0)
    p.add_argument("--rmax", type=float, default=1280.0)
    p.add_argument("--points", type=int, default=8)

    p = sub.add_parser("asymptotics", parents=[common], help="slope, radial limit, and bounds report")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--rmin", type=float, default=1e2)
    p.add_argument("--rmax", type=float, default=1e5)
    p.add_argument("--points", type=int, default=13)

    p = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    p.add_argument("--suite", default="all", help="pizzetti | layercake | consistency | jensen | all")

    sub.add_parser("catalog", parents=[common], help="list built-in profiles")
    return parser


def _emit(payload: dict, fmt: str, csv_table=None) -> None:
    if fmt == "csv" and csv_table is not None:
        header, rows = csv_table
        sys.stdout.write(dump_csv(header, rows))
    else:
        print(dump_json(payload))


def _dispatch(args) -> int:
    sections = load_config_file(args.config) if args.config else None
    cfg = RunConfig(
        n=args.n,
        profile=args.profile,
        rel_tol=args.rel_tol,
        abs_tol=args.abs_tol,
        tail_cut=args.tail_cut,
        sphere_nodes=args.sphere_nodes,
        r_min=getattr(args, "rmin", RunConfig.r_min),
        r_max=getattr(args, "rmax", RunConfig.r_max),
        output_format=args.format,
        eps=getattr(args, "eps", RunConfig.eps),
    )
    spec = build_spec(cfg, sections)
    ctx = context_for(cfg)

    if args.command == "ctx":
        payload = {
            "schema": 1,
            "command": "ctx",
            "n": ctx.n,
            "m": ctx.m,
            "c_n": ctx.c_n,
            "omega_n_minus_1": ctx.omega_n_minus_1,
            "omega_n": ctx.omega_n,
            "q_sphere": ctx.q_sphere,
            "pizzetti": list(ctx.pizzetti),
            "d_chain": list(ctx.d_chain),
        }
        _emit(payload, args.format)
        return 0

    if args.command == "catalog":
        payload = {
            "schema": 1,
            "command": "catalog",
            "profiles": [
                {"selector": "sphere:<alpha>", "description": "spherical family, alpha in (0, 1]"},
                {"selector": "counterexample", "description": "log factor plus |x|^2; mass 2, not normal"},
                {"selector": "file:<path>", "description": "CSV samples of (r, u), spline-interpolated"},
            ],
        }
        _emit(payload, args.format)
        return 0

    u = resolve_profile(ctx, args.profile)
    base = {"schema": 1, "command": args.command, "n": ctx.n, "profile": args.profile}

    if args.command == "q-curvature":
        q = q_curvature(ctx, u)(args.r)
        _emit({**base, "r": args.r, "q": q}, args.format)
        return 0

    if args.command == "alpha":
        alpha = total_alpha(ctx, density(ctx, u), spec)
        payload = {**base, "alpha": alpha, "total_integral": alpha * ctx.c_n}
        _emit(payload, args.format)
        return 0

    if args.command == "decay":
        grid = make_grid(args.rmin, args.rmax, args.points)
        rep = decay_margin(ctx, u, grid)
        payload = {**base, "verdict": rep.verdict, "table": [list(t) for t in rep.table]}
        _emit(payload, args.format, csv_table=(["r", "eps"], rep.table))
        return 0

    if args.command == "potential":
        d = density(ctx, u)
        v = potential_v(ctx, d, args.r, spec)
        b = bad_term_b(ctx, d, args.r, spec)
        _emit({**base, "r": args.r, "v": v, "bad_term": b}, args.format)
        return 0

    if args.command == "normality":
        grid = [float(tok) for tok in args.grid.split(",") if tok.strip()]
        rep = normality_residual(ctx, u, spec, grid)
        payload = {
            **base,
            "constant_estimate": rep.constant_estimate,
            "residual_sup": rep.residual_sup,
            "v_values": [list(t) for t in rep.v_values],
        }
        _emit(payload, args.format, csv_table=(["r", "v"], rep.v_values))
        return 0

    if args.command == "defect":
        grid = make_grid(args.rmin, args.rmax, args.points)
        rep = defect_extrapolate(ctx, u, spec, grid)
        comp = completeness_classify(ctx, u, spec)
        decay_grid = np.geomspace(3.0, 12.0, 8)
        decay = decay_margin(ctx, u, decay_grid)
        payload = {
            **base,
            "alpha": rep.alpha,
            "defect_extrapolated": rep.defect_extrapolated,
            "fit_model": rep.fit_model,
            "fit_residual": rep.fit_residual,
            "consistency_gap": rep.consistency_gap,
            "low_confidence": rep.low_confidence,
            "completeness": comp.verdict,
            "decay_verdict": decay.verdict,
            "defect_samples": [list(t) for t in rep.defect_samples],
        }
        _emit(payload, args.format, csv_table=(["r", "isoperimetric_ratio"], rep.defect_samples))
        return 0

    if args.command == "asymptotics":
        grid = make_grid(args.rmin, args.rmax, args.points)
        rep = asymptotics_report(ctx, u, spec, eps=args.eps, r_grid=grid)
        payload = {
            **base,
            "alpha": rep.alpha,
            "slope": rep.slope,
            "slope_residual": rep.slope_residual,
            "non_logarithmic": rep.non_logarithmic,
            "ru_prime_limit": rep.ru_prime_limit,
            "bounds_ok": rep.bounds_ok,
            "ru_prime_tail": [list(t) for t in rep.ru_prime_tail],
        }
        _emit(payload, args.format, csv_table=(["r", "r_u_prime"], rep.ru_prime_tail))
        return 0

    if args.command == "verify":
        results = run_suite(args.suite, spec)
        payload = {
            **base,
            "suite": args.suite,
            "passed": all(r.passed for r in results),
            "checks": [
                {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
            ],
        }
        _emit(payload, args.format)
        return 0 if payload["passed"] else 1

    raise QcurvError(f"unhandled command {args.command}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except QcurvError as exc:
        print(f"qcurv: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"qcurv: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
