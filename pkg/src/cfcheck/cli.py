"""Command-line interface: ``cfcheck {worlds,eval,check,locality,report}``.

Exit status: 0 on success (or when a check's expectation is met), 1 when
an expectation fails, 2 on any input error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any, Callable, Optional, Sequence

from . import output
from .analysis import (
    SR_TEXT,
    check_property_I,
    check_property_II,
    her_report,
    locality_analysis,
)
from .evaluator import EvaluationError, eval_at, strict_implies
from .formula import FormulaError, StrictImplies, parse, to_text
from .scenario import Scenario, ScenarioError
from .scenario_file import bundled_scenario_path, load_scenario, parse_world
from .worlds import (
    DEFAULT_MAX_WORLDS,
    check_possibilities,
    eliminations,
    enumerate_candidates,
    filter_possible,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


def _scenario(args) -> Scenario:
    path = args.scenario or bundled_scenario_path("her")
    try:
        return load_scenario(path)
    except OSError as exc:
        raise InputError(f"cannot read scenario file: {exc}") from None


def _formula(text: str, s: Scenario):
    try:
        return parse(text, s)
    except FormulaError as exc:
        raise InputError(f"formula error: {exc}\n{exc.pointer()}") from None


def _possible(s: Scenario, args):
    candidates = enumerate_candidates(s, args.max_worlds)
    return candidates, filter_possible(candidates, s)


def cmd_worlds(args) -> tuple[dict[str, Any], int]:
    s = _scenario(args)
    candidates, possible = _possible(s, args)
    doc = output.world_tables(
        candidates, eliminations(candidates, s), possible, check_possibilities(possible, s)
    )
    doc["scenario"] = s.name
    return doc, EXIT_OK


def cmd_eval(args) -> tuple[dict[str, Any], int]:
    s = _scenario(args)
    _, possible = _possible(s, args)
    try:
        w = parse_world(args.world, s)
    except ScenarioError as exc:
        raise InputError(f"bad world literal {args.world!r}: {exc}") from None
    if w not in possible:
        raise InputError(f"({w.format()}) is not a possible world of scenario {s.name}")
    f = _formula(args.formula, s)
    doc = {"scenario": s.name, "world": w.format(), "formula": to_text(f)}
    doc.update(output.verdict(eval_at(f, w, possible)))
    return doc, EXIT_OK


def cmd_check(args) -> tuple[dict[str, Any], int]:
    s = _scenario(args)
    _, possible = _possible(s, args)
    if args.strict is not None:
        f = _formula(args.strict, s)
        if not isinstance(f, StrictImplies):
            raise InputError("--strict expects a formula of the form 'A => B'")
        v = strict_implies(f.left, f.right, possible)
        doc = {"scenario": s.name, "kind": "strict", "formula": to_text(f), "expected": True, "passed": v.value}
        doc.update(output.verdict(v))
        return doc, EXIT_OK if v.value else EXIT_FAILED
    statement = _formula(args.formula, s) if args.formula else None
    check = check_property_I if args.property == "I" else check_property_II
    rep = check(s, statement, possible)
    doc = {"scenario": s.name, "kind": "property"}
    doc.update(output.property_report(rep))
    return doc, EXIT_OK if rep.passed else EXIT_FAILED


def cmd_locality(args) -> tuple[dict[str, Any], int]:
    s = _scenario(args)
    _, possible = _possible(s, args)
    f = _formula(args.formula, s)
    rep = locality_analysis(f, args.region, s, possible)
    return {"scenario": s.name, **output.locality_report(rep)}, EXIT_OK


def cmd_report(args) -> tuple[dict[str, Any], int]:
    s = _scenario(args)
    statement = _formula(args.formula, s) if args.formula else None
    rep = her_report(s, statement, args.max_worlds)
    return output.her(rep), EXIT_OK if rep.expectations_met else EXIT_FAILED


_TEXT: dict[str, Callable[[dict[str, Any]], str]] = {
    "worlds": output.text_worlds,
    "eval": output.text_eval,
    "check": output.text_check,
    "locality": output.text_locality,
    "report": output.text_report,
}


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "scenario", nargs="?", help="scenario file (default: the bundled HER scenario)"
    )
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument(
        "--max-worlds", type=_positive, default=DEFAULT_MAX_WORLDS,
        help="refuse scenarios with more candidate worlds than this",
    )

    parser = argparse.ArgumentParser(
        prog="cfcheck", description="Counterfactual model checker for measurement scenarios."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("worlds", parents=[common], help="list candidate, eliminated and possible worlds")

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula at a possible world")
    p.add_argument("--world", required=True, help='world literal, e.g. "L2+,R2+"')
    p.add_argument("--formula", default=SR_TEXT, help="formula (default: SR)")

    p = sub.add_parser("check", parents=[common], help="check property I/II or a strict implication")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--property", choices=("I", "II"))
    group.add_argument("--strict", metavar="'A => B'")
    p.add_argument("--formula", help="statement to use in place of SR for --property")

    p = sub.add_parser("locality", parents=[common], help="test whether a formula depends on one region only")
    p.add_argument("--formula", default=SR_TEXT, help="formula (default: SR)")
    p.add_argument("--region", required=True)

    p = sub.add_parser("report", parents=[common], help="full analysis of the scenario")
    p.add_argument("--formula", help="statement to use in place of SR")
    return parser


_COMMANDS = {
    "worlds": cmd_worlds,
    "eval": cmd_eval,
    "check": cmd_check,
    "locality": cmd_locality,
    "report": cmd_report,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        doc, status = _COMMANDS[args.command](args)
    except (InputError, ScenarioError, FormulaError, EvaluationError) as exc:
        print(f"cfcheck: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    doc = {"command": args.command, "format_version": output.FORMAT_VERSION, **doc}
    if args.format == "machine":
        sys.stdout.write(output.dumps(doc))
    else:
        sys.stdout.write(_TEXT[args.command](doc))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
