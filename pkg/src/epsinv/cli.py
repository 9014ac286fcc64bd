"""Batch command-line front end.

Exit codes: 0 success, 1 invalid input, 2 hypothesis violation,
3 non-convergence, 4 cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings

from . import io
from .attractor import attractor_iterate, measure_zero_verdict, norm_decay_check
from .branches import Transformation
from .errors import EpsInvError, InvalidInput
from .measures import (
    DensityMeasure,
    build_g_orthogonal,
    build_g_piecewise,
    check_density_criterion,
    check_set_criterion,
    cylinder_interval,
    density_equivalent,
    nu0,
    nu_on_intervalset,
    random_battery,
    words,
)
from .operators import fp_operator, iterate
from .scalars import FLOAT, MODES, RATIONAL, parse_scalar
from .solvers import CESARO, CONVERGED, FAMILY, NEUMANN, UNIQUE, SolveOptions, solve

log = logging.getLogger("epsinv")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_HYPOTHESIS = 2
EXIT_NONCONVERGED = 3
EXIT_CAP = 4


def _scalar_arg(text: str, mode: str):
    try:
        return parse_scalar(text, mode)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc


def _load(path: str):
    try:
        return io.load_json(path)
    except FileNotFoundError as exc:
        raise InvalidInput(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: {exc}") from exc


def _emit(payload, out: str | None) -> None:
    text = io.dumps(payload)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _system(args):
    return io.system_from_json(_load(args.system), args.mode)


def cmd_validate(args) -> int:
    system = _system(args)
    _emit({"flags": system.flags.as_dict(), "system": io.system_to_json(system)}, args.out)
    return EXIT_OK


def cmd_apply(args) -> int:
    system = _system(args)
    f = io.stepfun_from_json(_load(args.f), args.mode)
    P = fp_operator(system)
    Pf = iterate(P, f, args.power)
    if args.csv:
        Pf.to_csv(args.csv)
    _emit(io.stepfun_to_json(Pf), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    system = _system(args)
    g = io.stepfun_from_json(_load(args.g), args.mode)
    P = fp_operator(system)
    regime = args.regime or (FAMILY if P.preserves_one else UNIQUE)
    opts = SolveOptions(
        method=args.method,
        tol=args.tol,
        max_iters=args.max_iters,
        stall_window=args.stall_window,
        mode=regime,
        strict=args.strict,
    )
    res = solve(P, g, opts)
    if args.csv:
        res.phi.to_csv(args.csv)
    _emit(io.solve_result_to_json(res), args.out)
    return EXIT_OK if res.status == CONVERGED else EXIT_NONCONVERGED


def cmd_attractor(args) -> int:
    system = _system(args)
    trace = attractor_iterate(system, args.depth)
    if args.csv:
        trace.to_csv(args.csv)
    payload = io.trace_to_json(trace)
    if args.depth >= 2:
        payload["measure_zero"] = measure_zero_verdict(trace)
    if args.g_norm:
        f = io.stepfun_from_json(_load(args.g_norm), args.mode)
        payload["norm_decay"] = [
            {"m": m, "norm": lhs, "integral": rhs, "equal": eq}
            for m, lhs, rhs, eq in norm_decay_check(system, f, args.depth)
        ]
    _emit(payload, args.out)
    return EXIT_OK


def cmd_measure_verify(args) -> int:
    system = _system(args)
    density = io.stepfun_from_json(_load(args.density), args.mode)
    eps = _scalar_arg(args.epsilon, args.mode)
    P = fp_operator(system)
    nu = DensityMeasure(density)
    sets = random_battery(args.seed, args.sets)
    if args.mode == FLOAT:
        sets = [io.intervalset_from_json(io.intervalset_to_json(A), FLOAT) for A in sets]
    report = check_set_criterion(nu, Transformation(system), eps, sets)
    payload = {
        "density_criterion": check_density_criterion(density, P, eps),
        "set_criterion": io.set_report_to_json(report),
        "seed": args.seed,
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_cylinder(args) -> int:
    m = io.cylinder_spec_from_json(_load(args.spec), args.mode)
    system = m.system
    payload = {"spec": io.cylinder_spec_to_json(m)}
    if args.word:
        w = tuple(int(s) for s in args.word.split(","))
        I = cylinder_interval(system, w)
        payload["word"] = {"symbols": list(w), "interval": [I.lo, I.hi], "nu0": nu0(m, w)}
    if args.set:
        A = io.intervalset_from_json(_load(args.set), args.mode)
        value, bound = nu_on_intervalset(m, A, args.depth)
        payload["set"] = {"value": value, "error_bound": bound, "depth": args.depth}
    rows = []
    for k in range(1, args.depth + 1):
        for w in words(m.N, k):
            I = cylinder_interval(system, w)
            rows.append({"word": list(w), "lo": I.lo, "hi": I.hi, "nu0": nu0(m, w)})
    payload["cylinders"] = rows
    payload["density"] = io.stepfun_to_json(density_equivalent(m).density)
    _emit(payload, args.out)
    return EXIT_OK


def cmd_build_g(args) -> int:
    system = _system(args)
    eps = _scalar_arg(args.epsilon, args.mode) if args.epsilon is not None else None
    if args.gammas:
        gammas = [_scalar_arg(s, args.mode) for s in args.gammas.split(",")]
        g, nu = build_g_piecewise(system, gammas, eps)
    elif args.g0:
        if eps is None:
            raise InvalidInput("--epsilon is required with --g0")
        g0 = io.stepfun_from_json(_load(args.g0), args.mode)
        g = build_g_orthogonal(system, g0, eps)
        nu = DensityMeasure(g + 1)
    else:
        raise InvalidInput("give --gammas or --g0")
    Pg = fp_operator(system)(g)
    _emit(
        {
            "g": io.stepfun_to_json(g),
            "density": io.stepfun_to_json(nu.density),
            "Pg_is_zero": Pg.is_zero(),
            "integral": g.integral(),
        },
        args.out,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="epsinv", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, system=True):
        if system:
            p.add_argument("--system", required=True, help="branch system JSON")
        p.add_argument("--mode", choices=MODES, default=RATIONAL)
        p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("validate", help="report the structural condition flags")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("apply", help="apply the transfer operator (power times)")
    common(p)
    p.add_argument("--f", required=True, help="step function JSON")
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("solve", help="solve phi = P phi + g")
    common(p)
    p.add_argument("--g", required=True, help="step function JSON")
    p.add_argument("--method", choices=(NEUMANN, CESARO), default=NEUMANN)
    p.add_argument("--regime", choices=(FAMILY, UNIQUE), help="default: family iff P1 = 1")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iters", type=int, default=10000)
    p.add_argument("--stall-window", type=int, default=5)
    p.add_argument("--strict", action="store_true", help="reject g with nonzero integral")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("attractor", help="pre-attractor levels A_m")
    common(p)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--csv")
    p.add_argument("--g-norm", help="nonnegative step function for the norm identity check")
    p.set_defaults(func=cmd_attractor)

    p = sub.add_parser("measure-verify", help="check epsilon-invariance of a density")
    common(p)
    p.add_argument("--density", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--sets", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_measure_verify)

    p = sub.add_parser("cylinder", help="cylinder intervals and masses")
    common(p, system=False)
    p.add_argument("--spec", required=True, help="cylinder measure JSON")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--word", help="comma-separated symbols, outermost first")
    p.add_argument("--set", help="interval set JSON to measure")
    p.set_defaults(func=cmd_cylinder)

    p = sub.add_parser("build-g", help="construct g with P g = 0")
    common(p)
    p.add_argument("--gammas", help="comma-separated constants, one per branch")
    p.add_argument("--g0", help="step function JSON on [0, f_N(0))")
    p.add_argument("--epsilon")
    p.set_defaults(func=cmd_build_g)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            return args.func(args)
    except EpsInvError as exc:
        print(f"epsinv: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
