"""Command line interface: ``sib solve|certify|oracle|bounds|objective``.

Exit codes: 0 success, 1 usage error, 2 problem-file parse error,
3 certificate failed or inconclusive, 4 the sets share a common point.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from .certify import certify_optimality, problem_radius_bounds
from .errors import CommonPointError, InvalidInputError, ParseError, SIBError
from .oracle import GridSpec, default_box, grid_search
from .problemfile import fmt5, parse_problem, trace_csv
from .solver import SolveConfig, StepSchedule, active_set, objective, solve

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CERT = 3
EXIT_COMMON = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _floats(text, what, count=None):
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise UsageError(f"{what}: expected {count} numbers, got {len(vals)}")
    if not all(np.isfinite(vals)):
        raise UsageError(f"{what}: values must be finite")
    return vals


def _ints(text, what):
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated integers, got {text!r}") from None


def _load(path):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_problem(data)


def _vec(v):
    return ",".join(fmt5(t) for t in v)


def cmd_solve(args, out):
    problem, config = _load(args.file)
    m = problem.dimension
    changes = {}
    if args.iters is not None:
        if args.iters < 1:
            raise UsageError("--iters must be positive")
        changes["iterations"] = args.iters
        changes["checkpoints"] = None
    if args.start is not None:
        changes["start"] = _floats(args.start, "--start", m)
    if args.checkpoints is not None:
        changes["checkpoints"] = _ints(args.checkpoints, "--checkpoints")
    if args.step is not None or args.c is not None or args.s is not None:
        family = {"c/k": "c_over_k", "c/k^s": "c_over_k_pow", None: config.schedule.family}[args.step]
        if args.step is None and args.s is not None:
            # an explicit exponent only makes sense for the c/k^s family
            family = "c_over_k_pow"
        c = args.c if args.c is not None else config.schedule.c
        s = args.s if args.s is not None else config.schedule.s
        changes["schedule"] = StepSchedule(family, c, s)
    if args.early_stop is not None:
        tol, window = _floats(args.early_stop, "--early-stop", 2)
        changes["early_stop"] = (tol, int(window))
    if changes:
        try:
            config = dataclasses.replace(config, **changes)
        except InvalidInputError as exc:
            raise UsageError(str(exc)) from None

    trace = solve(problem, config)
    text = trace_csv(trace, m)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    note = " (early stop)" if trace.stopped_early else ""
    out.write(f"best_x={_vec(trace.best_point)} best_V={fmt5(trace.best_value)}{note}\n")
    return EXIT_OK


def cmd_certify(args, out):
    problem, _ = _load(args.file)
    x = _floats(args.at, "--at", problem.dimension)
    cert = certify_optimality(problem, x, args.tol)
    out.write(cert.as_text() + "\n")
    return EXIT_OK if cert.passed else EXIT_CERT


def cmd_objective(args, out):
    problem, _ = _load(args.file)
    x = _floats(args.at, "--at", problem.dimension)
    out.write(f"D={objective(problem, x):.10g}\n")
    out.write(f"active={active_set(problem, x, args.tol)}\n")
    return EXIT_OK


def cmd_oracle(args, out):
    problem, _ = _load(args.file)
    m = problem.dimension
    if args.box is not None:
        vals = _floats(args.box, "--box", 2 * m)
        lo, hi = vals[:m], vals[m:]
    else:
        lo, hi = default_box(problem)
    kw = {}
    if args.cells is not None:
        kw["cells_per_axis"] = args.cells
    if args.refine is not None:
        kw["refinements"] = args.refine
    if args.shrink is not None:
        kw["shrink"] = args.shrink
    try:
        spec = GridSpec(lo, hi, **kw)
    except InvalidInputError as exc:
        raise UsageError(str(exc)) from None
    res = grid_search(problem, spec)
    out.write(f"x_hat={_vec(res.x_hat)} value={fmt5(res.value)} "
              f"resolution={res.resolution:.3e}\n")
    return EXIT_OK


def cmd_bounds(args, out):
    problem, _ = _load(args.file)
    try:
        b = problem_radius_bounds(problem)
    except InvalidInputError as exc:
        raise UsageError(str(exc)) from None
    out.write(f"lower={b.lower:.10g}\nupper={b.upper:.10g}\ndiam={b.diam:.10g}\nell={b.ell}\n")
    return EXIT_OK


def build_parser():
    p = _Parser(prog="sib", description="Smallest intersecting ball solver")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="run the subgradient method and write a CSV trace")
    s.add_argument("file")
    s.add_argument("--iters", type=int)
    s.add_argument("--step", choices=["c/k", "c/k^s"])
    s.add_argument("--c", type=float)
    s.add_argument("--s", type=float)
    s.add_argument("--start")
    s.add_argument("--checkpoints")
    s.add_argument("--out")
    s.add_argument("--early-stop", dest="early_stop", metavar="TOL,WINDOW")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("certify", help="check optimality of a point")
    c.add_argument("file")
    c.add_argument("--at", required=True)
    c.add_argument("--tol", type=float)
    c.set_defaults(func=cmd_certify)

    o = sub.add_parser("oracle", help="brute-force grid search")
    o.add_argument("file")
    o.add_argument("--cells", type=int)
    o.add_argument("--refine", type=int)
    o.add_argument("--shrink", type=float)
    o.add_argument("--box", metavar="LO...,HI...")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bounds", help="radius bounds for euclidean ball targets")
    b.add_argument("file")
    b.set_defaults(func=cmd_bounds)

    d = sub.add_parser("objective", help="evaluate D and the active set at a point")
    d.add_argument("file")
    d.add_argument("--at", required=True)
    d.add_argument("--tol", type=float, default=0.0)
    d.set_defaults(func=cmd_objective)
    return p


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"sib: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"sib: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CommonPointError as exc:
        print(f"sib: {exc}", file=sys.stderr)
        return EXIT_COMMON
    except (InvalidInputError, SIBError) as exc:
        print(f"sib: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
