"""Command-line driver for the funasp pipeline.

Exit codes: 0 success, 1 syntax or type error, 2 unsafe program,
3 oracle/translation mismatch, 4 search budget exhausted.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .faspc import fasp_answer_sets, fasp_ground, project
from .flatten import UnsafeProgram, translate_program, translate_theory, TranslationContext
from .htsem import DEFAULT_MAX_NODES, SearchSpaceTooLarge, equilibrium_models, format_state
from .lpcore import LiftError, translated_models
from .parser import ParseError, format_fasp, format_program, load
from .safety import check_flp_program

EXIT_OK = 0
EXIT_SYNTAX = 1
EXIT_UNSAFE = 2
EXIT_MISMATCH = 3
EXIT_RESOURCE = 4


def format_models(states) -> str:
    """Count line, then one model per line in canonical order."""
    lines = sorted(format_state(s) for s in states)
    head = f"{len(lines)} model" + ("" if len(lines) == 1 else "s")
    return "".join(line + "\n" for line in [head] + lines)


def _out(text):
    sys.stdout.write(text)


def _err(text):
    sys.stderr.write(text if text.endswith("\n") else text + "\n")


def _unsafe(report):
    for v in report.violations:
        _err(str(v))
    return EXIT_UNSAFE


def cmd_parse(args):
    src = load(args.file)
    _out(format_fasp(src.fasp) if src.kind == "FASP" else format_program(src))
    return EXIT_OK


def cmd_check(args):
    report = check_flp_program(load(args.file).program)
    if not report.safe:
        return _unsafe(report)
    _out("safe\n")
    return EXIT_OK


def cmd_translate(args):
    program = load(args.file).program
    if not args.no_safety_check:
        report = check_flp_program(program)
        if not report.safe:
            return _unsafe(report)
    if args.emit_intermediate:
        theory = translate_theory(program, TranslationContext(program.signature))
        _out("".join(f"{r}\n" for r in theory))
    else:
        _out(str(translate_program(program, check_safety=False)))
    return EXIT_OK


def _solve(program, method, max_nodes, check_safety=True):
    if method == "oracle":
        return equilibrium_models(program, max_nodes)
    return translated_models(program, max_nodes, check_safety=check_safety)


def cmd_solve(args):
    src = load(args.file)
    program = src.program
    if args.no_safety_check and args.max_search is None:
        _err("error: --no-safety-check with solve needs an explicit --max-search")
        return EXIT_SYNTAX
    if not args.no_safety_check:
        report = check_flp_program(program)
        if not report.safe:
            return _unsafe(report)
    max_nodes = args.max_search or DEFAULT_MAX_NODES
    models = _solve(program, args.method, max_nodes, not args.no_safety_check)
    if src.kind == "FASP":
        models = [project(s, src.fasp) for s in models]
    _out(format_models(models))
    return EXIT_OK


def _diff(name_a, a, name_b, b):
    sa = {format_state(s) for s in a}
    sb = {format_state(s) for s in b}
    lines = [f"only {name_a}: {m}" for m in sorted(sa - sb)]
    lines += [f"only {name_b}: {m}" for m in sorted(sb - sa)]
    return lines


def cmd_compare(args):
    src = load(args.file)
    program = src.program
    report = check_flp_program(program)
    if not report.safe:
        return _unsafe(report)
    max_nodes = args.max_search or DEFAULT_MAX_NODES
    oracle = equilibrium_models(program, max_nodes)
    try:
        translated = translated_models(program, max_nodes)
    except LiftError as exc:
        _err(f"mismatch: {exc}")
        return EXIT_MISMATCH
    diff = _diff("oracle", oracle, "translate", translated)
    if src.kind == "FASP":
        answer_sets = fasp_answer_sets(fasp_ground(src.fasp), max_nodes)
        projected = [project(s, src.fasp) for s in oracle]
        diff += _diff("oracle", projected, "fasp", answer_sets)
    if diff:
        _err("\n".join(["mismatch:"] + diff))
        return EXIT_MISMATCH
    _out(f"agree: {len(oracle)} model" + ("" if len(oracle) == 1 else "s") + "\n")
    return EXIT_OK


def cmd_fasp2flp(args):
    src = load(args.file)
    if src.kind != "FASP":
        _err(f"{args.file}: error: expected a .fasp program")
        return EXIT_SYNTAX
    from .ast import format_rule

    _out("".join(format_rule(r) + "\n" for r in src.program.rules))
    return EXIT_OK


def cmd_selftest(args):
    from .random_programs import random_programs

    bad = 0
    for i, program in enumerate(random_programs(args.seed, args.count)):
        a = equilibrium_models(program)
        b = translated_models(program)
        if a != b:
            bad += 1
            _err(f"program {i} disagrees:\n" + "\n".join(_diff("oracle", a, "translate", b)))
    _out(f"{args.count - bad}/{args.count} random programs agree\n")
    return EXIT_MISMATCH if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="funasp", description="Functional answer set programs: "
                                 "parse, check safety, translate to normal programs and solve.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        return p

    def file_arg(p):
        p.add_argument("file", help='program file (.flp or .fasp); "-" reads FLP from stdin')

    file_arg(add("parse", cmd_parse, "parse and pretty-print a program"))
    file_arg(add("check", cmd_check, "check safety"))
    p = add("translate", cmd_translate, "flatten to a normal logic program")
    file_arg(p)
    p.add_argument("--emit-intermediate", action="store_true",
                   help="print the flattened theory before normalization")
    p.add_argument("--no-safety-check", action="store_true")
    p = add("solve", cmd_solve, "enumerate models")
    file_arg(p)
    p.add_argument("--method", choices=("oracle", "translate"), default="oracle")
    p.add_argument("--max-search", type=int, default=None, metavar="N",
                   help=f"search node budget (default {DEFAULT_MAX_NODES})")
    p.add_argument("--no-safety-check", action="store_true")
    p = add("compare", cmd_compare, "check that both solving methods agree")
    file_arg(p)
    p.add_argument("--max-search", type=int, default=None, metavar="N")
    file_arg(add("fasp2flp", cmd_fasp2flp, "print the FLP embedding of a FASP program"))
    p = add("selftest", cmd_selftest, "compare both methods on random programs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        _err(str(exc))
        return EXIT_SYNTAX
    except UnsafeProgram as exc:
        return _unsafe(exc.report)
    except SearchSpaceTooLarge as exc:
        _err(f"error: {exc}")
        return EXIT_RESOURCE
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_SYNTAX


if __name__ == "__main__":
    sys.exit(main())
