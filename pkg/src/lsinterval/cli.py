"""Command-line interface.

Exit codes: 0 success, 1 failed verification or bad input, 2 no Maurer-Cartan
solution / not Maurer-Cartan, 3 disconnected components.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from .errors import DisconnectedComponents, LsError, NoSolution, NotMaurerCartan
from .expr import evaluate, parse
from .interval import (
    build_interval,
    build_quotient_model,
    build_subdivision,
    classify_mc,
    connect,
    solve_family,
    solve_mc,
)
from .serial import element_from_obj, element_to_obj, format_rational, print_canonical
from .verify import SUITES, run_suite

CONTEXTS = {
    "ls": build_interval,
    "subdivision": lambda n: build_subdivision(n)[0],
    "quotient": lambda n: build_quotient_model(n)[0],
}


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _descriptor_obj(d) -> dict:
    return {
        "family": d.family,
        "param": format_rational(d.param),
        "text": print_canonical(d.element),
        "element": element_to_obj(d.element),
    }


def cmd_expand(args) -> int:
    ctx = CONTEXTS[args.context](args.max_len)
    value = evaluate(parse(args.expr, ctx), ctx)
    if args.format == "json":
        print(json.dumps(element_to_obj(value)))
    else:
        print(print_canonical(value))
    return 0


def cmd_mc(args) -> int:
    try:
        if args.mc_command == "solve":
            if args.linear is not None:
                desc = solve_mc(args.linear[0], args.linear[1], args.max_len)
            else:
                desc = solve_family(args.family, args.param, args.max_len)
        else:
            with open(args.input) as fh:
                obj = json.load(fh)
            element_obj = obj.get("element", obj) if isinstance(obj, dict) else obj
            n = element_obj.get("truncation") if isinstance(element_obj, dict) else None
            ctx = build_interval(n if isinstance(n, int) and n >= 1 else 1)
            desc = classify_mc(element_from_obj(element_obj, ctx.generators), ctx)
    except NoSolution as exc:
        print(f"NoSolution: {exc}; constraint: {exc.witness}", file=sys.stderr)
        return 2
    except NotMaurerCartan as exc:
        print(f"NotMaurerCartan: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(_descriptor_obj(desc), indent=2)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


def cmd_connect(args) -> int:
    n = args.max_len
    source = solve_family(args.from_family, args.from_param, n)
    target = solve_family(args.to_family, args.to_param, n)
    try:
        arrow = connect(source, target)
    except DisconnectedComponents as exc:
        print(f"DisconnectedComponents: {exc}", file=sys.stderr)
        return 3
    print(f"nu = {format_rational(arrow.nu)}")
    print(f"verified: gauge({format_rational(arrow.nu)}*x, {print_canonical(target.element)})"
          f" = {print_canonical(source.element)}  (N = {n})")
    return 0


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.max_len, args.seed, args.jobs)
    if args.format == "json":
        print(json.dumps(report.to_obj(), indent=2))
    else:
        print(report.to_text())
    if args.timing:
        print(f"elapsed: {report.elapsed:.2f}s", file=sys.stderr)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lsinterval",
        description="Exact computations in the Lawrence-Sullivan interval.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("expand", help="evaluate an expression to tensor words")
    e.add_argument("--expr", required=True)
    e.add_argument("--max-len", type=_positive, default=6)
    e.add_argument("--format", choices=("text", "json"), default="text")
    e.add_argument("--context", choices=sorted(CONTEXTS), default="ls")
    e.set_defaults(func=cmd_expand)

    m = sub.add_parser("mc", help="solve or classify Maurer-Cartan elements")
    msub = m.add_subparsers(dest="mc_command", required=True)
    s = msub.add_parser("solve")
    s.add_argument("--lambda", dest="param", type=_rational, default=Fraction(1))
    s.add_argument("--family", choices=("I", "II"), default="I")
    s.add_argument("--linear", nargs=2, type=_rational, metavar=("A_COEFF", "B_COEFF"),
                   help="solve for an arbitrary linear part A_COEFF*a + B_COEFF*b")
    s.add_argument("--max-len", type=_positive, default=6)
    s.add_argument("--output")
    c = msub.add_parser("classify")
    c.add_argument("--input", required=True)
    m.set_defaults(func=cmd_mc)

    k = sub.add_parser("connect", help="arrow between two Maurer-Cartan elements")
    k.add_argument("--from-family", choices=("I", "II"), required=True)
    k.add_argument("--from-param", type=_rational, required=True)
    k.add_argument("--to-family", choices=("I", "II"), required=True)
    k.add_argument("--to-param", type=_rational, required=True)
    k.add_argument("--max-len", type=_positive, default=6)
    k.set_defaults(func=cmd_connect)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=("all",) + SUITES, default="all")
    v.add_argument("--max-len", type=_positive, default=8)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=_positive, default=1)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--timing", action="store_true", help="print elapsed time to stderr")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LsError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
