"""Command-line entry point: ``ntop {eval,axioms,cantor,hawkeye,fann}``.

Exit codes: 0 success, 1 a checked property failed, 2 bad usage or input,
3 a stream stalled within its fuel.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .arithmetic import evaluate, hawkeye_decide
from .axioms import SUITES, FaultyApartness, check_axioms, standard_fragment
from .core import TOP, NtopError, StallError, default_fuel
from .expr import ParseError, parse_expr, to_point
from .fann import FannError, branching, build_fann, level_counts, load_presentation
from .morphisms import apply_map, cantor_map
from .spaces import fmt_q, from_rational, from_ternary, parse_rational

MAX_PRECISION = 4096

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_STALL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _natural(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a natural number: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"not a natural number: {text!r}")
    return v


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _precision(args) -> int:
    if args.precision > MAX_PRECISION:
        raise UsageError(f"precision {args.precision} exceeds the maximum {MAX_PRECISION}")
    return args.precision


def _fuel(args) -> int:
    if args.fuel is not None:
        if args.fuel < 1:
            raise UsageError("--fuel must be at least 1")
        return args.fuel
    try:
        return default_fuel()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_eval(args, out) -> int:
    try:
        e = parse_expr(args.expr)
    except ParseError as exc:
        raise UsageError(f"parse error: {exc}") from None
    k, fuel = _precision(args), _fuel(args)
    print(evaluate(to_point(e, fuel), k, fuel), file=out)
    return EXIT_OK


def cmd_axioms(args, out) -> int:
    if args.space not in SUITES:
        raise UsageError(f"unknown space {args.space!r}; choose from {', '.join(SUITES)}")
    space, dots = standard_fragment(args.space, args.depth)
    if args.inject_fault:
        space = FaultyApartness(space, dots[1], dots[2])
    report = check_axioms(space, dots)
    print(f"space {args.space}  depth {args.depth}  dots {report.n_dots}", file=out)
    for line in report.lines(space.format_dot):
        print(line, file=out)
    print("all axioms PASS" if report.passed else "axiom check FAILED", file=out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_cantor(args, out) -> int:
    x = args.x
    if not 0 <= x <= 1:
        raise UsageError(f"x = {fmt_q(x)} is outside [0,1]")
    k, fuel = _precision(args), _fuel(args)
    image = apply_map(cantor_map, from_ternary(x), fuel)
    bound = Fraction(2, 1 << k)
    for i in range(fuel * (k + 1)):
        d = image[i]
        if d is not TOP and d.width <= bound:
            print(f"{d} = [{fmt_q(d.lo)}, {fmt_q(d.hi)}]", file=out)
            return EXIT_OK
    raise StallError(f"cantor: no dot of width <= 2^-{k - 1}", fuel=fuel, pulls=fuel * (k + 1))


def cmd_hawkeye(args, out) -> int:
    if args.tolerance < 1:
        raise UsageError("tolerance must be at least 1")
    call = hawkeye_decide(args.line, from_rational(args.ball), args.tolerance, _fuel(args))
    print(call, file=out)
    return EXIT_OK


def cmd_fann(args, out) -> int:
    try:
        pres = load_presentation(args.presentation, args.max_level)
        fragment = build_fann(pres, args.max_level)
    except FannError as exc:
        raise UsageError(f"invalid presentation: {exc}") from None
    print(f"presentation {pres.name}  max-level {args.max_level}  dots {len(fragment)}", file=out)
    for i, count in enumerate(level_counts(fragment)):
        print(f"level {i}: {count} dots", file=out)
    lo, hi, mean = branching(fragment)
    print(f"branching: min {lo}  max {hi}  mean {fmt_q(mean)}", file=out)
    print("shape: chain" if hi == 1 else "shape: branching", file=out)
    print("grading OK", file=out)
    report = check_axioms(fragment.space, fragment.dots)
    for line in report.lines(str):
        print(line, file=out)
    print("all axioms PASS" if report.passed else "axiom check FAILED", file=out)
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ntop", description="Exact computation on spaces of basic dots.")
    sub = parser.add_subparsers(dest="command", required=True)

    def fuel_flag(p):
        p.add_argument("--fuel", type=int, default=None,
                       help="pulls allowed per precision level (default: NTOP_FUEL or 64)")

    p = sub.add_parser("eval", help="evaluate an arithmetic expression to a dyadic interval")
    p.add_argument("expr")
    p.add_argument("-p", "--precision", type=_natural, default=16)
    fuel_flag(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("axioms", help="check the five space axioms on a finite fragment")
    p.add_argument("space", help=", ".join(SUITES))
    p.add_argument("--depth", type=_natural, default=4)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("cantor", help="evaluate the Cantor function at a rational in [0,1]")
    p.add_argument("x", type=_rational)
    p.add_argument("-p", "--precision", type=_natural, default=12)
    fuel_flag(p)
    p.set_defaults(func=cmd_cantor)

    p = sub.add_parser("hawkeye", help="call a ball IN, OUT or LET against a line")
    p.add_argument("line", type=_rational)
    p.add_argument("ball", type=_rational)
    p.add_argument("--tolerance", type=_natural, default=12)
    fuel_flag(p)
    p.set_defaults(func=cmd_hawkeye)

    p = sub.add_parser("fann", help="build a finitely branching space from a metric presentation")
    p.add_argument("presentation", help="unit-interval, point, cantor, or a presentation file")
    p.add_argument("--max-level", type=_natural, default=5)
    p.set_defaults(func=cmd_fann)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except StallError as exc:
        print(f"stall: {exc} (fuel {exc.fuel}, pulls {exc.pulls})", file=err)
        return EXIT_STALL
    except NtopError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
