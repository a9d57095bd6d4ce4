"""Command line front end.

Exit codes: 0 on success, 1 when a run or verification fails, 2 on usage
or parse errors.  Errors are reported as ``otmlab: <error-name>: message``.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .asm import bundled_programs, load_program, parse_program, print_program
from .errors import MissingOracle, OTMLabError, ParseError, PreconditionViolation, ProblemMismatch
from .problems import Problem, canonification, instances
from .reductions import (
    CountingOracle,
    GwWitness,
    WITNESSES,
    code_oracle,
    compose,
    get_witness,
    run_gw,
    run_relative,
    sabotaged,
    verify_suite,
)
from .setcode import canonical_code, code_to_text, decode, parse_code, parse_set, set_to_text
from .vm import Fuel, format_trace, run

USAGE_ERRORS = (ParseError, PreconditionViolation, ProblemMismatch, MissingOracle)


class _Usage(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="ascii", errors="surrogateescape")
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def _program(spec: str):
    """A file path, or the name of a bundled program (``copy`` or ``copy.otm``)."""
    if Path(spec).is_file() or spec == "-":
        return parse_program(_read_text(spec).encode("ascii", "surrogateescape"))
    name = spec[:-4] if spec.endswith(".otm") else spec
    if name in bundled_programs():
        return load_program(name)
    raise _Usage(f"no program file or bundled program named {spec!r}")


def _input_code(args):
    if args.input is not None and args.code is not None:
        raise _Usage("give at most one of --input and --code")
    if args.code is not None:
        return parse_code(args.code)
    if args.input is not None:
        return canonical_code(parse_set(args.input))
    return frozenset()


def _seeds(n: int) -> List[int]:
    if n < 0:
        raise _Usage("--seeds must be non-negative")
    return list(range(n))


# -- subcommands -------------------------------------------------------------


def cmd_asm(args, out) -> int:
    for path in args.files:
        prog = parse_program(_read_text(path).encode("ascii", "surrogateescape"))
        if not args.check:
            out.write(print_program(prog))
    return 0


def cmd_run(args, out) -> int:
    prog = _program(args.program)
    code = _input_code(args)
    oracle = None
    if args.oracle:
        oracle = code_oracle(Problem.parse(args.oracle), args.adversarial)
    fuel = Fuel(args.max_steps, args.max_limits, args.window)
    res = run(prog, code, oracle=oracle, fuel=fuel, trace=args.trace)
    if args.trace:
        out.write(format_trace(res.trace))
    out.write(f"outcome {res.outcome}\n")
    if not res.halted:
        if res.detail:
            out.write(f"detail {res.detail}\n")
        return 1
    tape = res.config.tapes[1]
    if not tape.is_finite():
        out.write(f"output-tape {tape.to_text()}\n")
        return 0
    c = res.output
    out.write(f"code {code_to_text(c)}\n")
    try:
        out.write(f"set {set_to_text(decode(c))}\n")
    except OTMLabError as exc:
        out.write(f"set undefined ({exc.name}: {exc})\n")
    return 0


def cmd_reduce(args, out) -> int:
    w = get_witness(args.witness)
    x = parse_set(args.input)
    if isinstance(w, GwWitness):
        z = run_gw(w, canonification(w.target, args.adversarial), x, _seeds(args.seeds))
        out.write(f"{set_to_text(z)}\n")
        return 0
    g = CountingOracle(code_oracle(w.target, args.adversarial))
    z = decode(run_relative(w.transformer, g, canonical_code(x)))
    out.write(f"{set_to_text(z)}\n")
    out.write(f"oracle-calls {g.calls}\n")
    return 0


def cmd_verify(args, out) -> int:
    names = args.witness or list(WITNESSES)
    ok = True
    for name in names:
        if "+" in name:
            parts = [get_witness(n) for n in name.split("+")]
            w = parts[0]
            for nxt in parts[1:]:
                w = compose(w, nxt)
        else:
            w = get_witness(name)
        if args.sabotage:
            if not isinstance(w, GwWitness):
                raise _Usage(f"--sabotage needs a gW witness, {name} is oracle-relative")
            w = sabotaged(w)
        xs = instances(w.source, args.max_rank, args.max_carrier)
        adversarial = (False,) if args.canonical_only else (False, True)
        report = verify_suite(w, xs, _seeds(args.seeds), adversarial, jobs=args.jobs)
        out.write(report.to_jsonl())
        ok = ok and report.passed
        print(
            f"{report.witness}: {len(report.entries) - len(report.failures)}/{len(report.entries)} passed",
            file=sys.stderr,
        )
    return 0 if ok else 1


def cmd_gen(args, out) -> int:
    for x in instances(Problem.parse(args.problem), args.max_rank, args.max_carrier):
        out.write(f"{set_to_text(x)}\n")
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="otmlab", description="Ordinal Turing machines and choice reductions.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    a = sub.add_parser("asm", help="validate and canonicalize program text")
    a.add_argument("files", nargs="+", metavar="FILE", help="program files, or - for stdin")
    a.add_argument("--check", action="store_true", help="validate only, print nothing")
    a.set_defaults(func=cmd_asm)

    r = sub.add_parser("run", help="run a program")
    r.add_argument("--program", required=True, help="program file or bundled name (%s)" % ", ".join(bundled_programs()))
    r.add_argument("--input", help="set literal, written to the scratch tape as its canonical code")
    r.add_argument("--code", help="raw code such as [2,5,6]")
    r.add_argument("--oracle", metavar="PROBLEM", help="answer MIRACLE calls with canonify(ac|acp|wo|zl)")
    r.add_argument("--adversarial", action="store_true", help="use the adversarial canonification")
    r.add_argument("--trace", action="store_true", help="emit the JSON-lines trace before the result")
    r.add_argument("--max-steps", type=int, default=Fuel.max_steps)
    r.add_argument("--max-limits", type=int, default=Fuel.max_limits)
    r.add_argument("--window", type=int, default=Fuel.window)
    r.set_defaults(func=cmd_run)

    d = sub.add_parser("reduce", help="run a witness on one instance")
    d.add_argument("--witness", required=True, choices=list(WITNESSES))
    d.add_argument("--input", required=True, help="instance as a set literal")
    d.add_argument("--adversarial", action="store_true")
    d.add_argument("--seeds", type=int, default=3, help="re-encodings of F(y) shown to P")
    d.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="run verify_suite and print a JSON-lines report")
    v.add_argument("--witness", action="append", help="witness name, or names joined by + to compose; repeatable; default all")
    v.add_argument("--max-rank", type=int, default=2)
    v.add_argument("--max-carrier", type=int, default=4)
    v.add_argument("--seeds", type=int, default=3, help="number of re-encoding seeds (0..N-1)")
    v.add_argument("--canonical-only", action="store_true", help="skip the adversarial canonification")
    v.add_argument("--sabotage", action="store_true", help="negative control: P returns the oracle answer")
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="print the instance suite of a problem, one literal per line")
    g.add_argument("--problem", required=True, help="ac, acp, wo or zl")
    g.add_argument("--max-rank", type=int, default=2)
    g.add_argument("--max-carrier", type=int, default=4)
    g.set_defaults(func=cmd_gen)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"otmlab: usage: {exc}", file=sys.stderr)
        return 2
    except USAGE_ERRORS as exc:
        print(f"otmlab: {exc.name}: {exc}", file=sys.stderr)
        return 2
    except OTMLabError as exc:
        print(f"otmlab: {exc.name}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # bad problem or witness names
        print(f"otmlab: usage: {exc}", file=sys.stderr)
        return 2


def main_exit() -> None:
    sys.exit(main())
