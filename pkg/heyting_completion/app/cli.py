"""
Command-line surface: gen, analyze, complete, check and suite.

Exit codes: 0 pass, 1 check failure, 2 input error, 3 resource limit.
"""
import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from ..config import DEFAULT_SETTINGS, Settings
from ..errors import (
    HeytingError,
    InputError,
    NotALattice,
    NotAPartialOrder,
    NotDistributive,
    ResourceLimit,
)
from .commands import cmd_analyze, cmd_check, cmd_complete, cmd_gen, cmd_suite
from .report import Report

log = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="debug logging")
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--seed", type=int, default=DEFAULT_SETTINGS.seed)
    common.add_argument("--max-carrier", type=int, default=DEFAULT_SETTINGS.max_carrier)
    common.add_argument("--workers", type=int, default=DEFAULT_SETTINGS.workers)
    return common


def build_parser() -> argparse.ArgumentParser:
    """Parser for the five subcommands; every subcommand takes the common options."""
    common = _common()
    parser = argparse.ArgumentParser(
        prog="heyting-completion",
        description="Centrally supplemented extensions and hyper-MacNeille completions of finite Heyting algebras.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", parents=[common], help="write the corpus of downset algebras")
    gen.add_argument("--max-points", type=int, default=4)
    gen.add_argument("--out", type=Path, required=True)

    analyze = commands.add_parser("analyze", parents=[common], help="describe one algebra")
    analyze.add_argument("file", type=Path)

    complete = commands.add_parser("complete", parents=[common], help="compute S(A) and A⁺")
    complete.add_argument("file", type=Path)
    complete.add_argument("--out", type=Path)
    complete.add_argument("--dump-relation", action="store_true", help="also write the N matrix of W_A")

    check = commands.add_parser("check", parents=[common], help="evaluate an equation")
    check.add_argument("target", type=Path, help="lattice file or corpus directory")
    check.add_argument("--eq", required=True, help='e.g. "1 = x2 v (x2 -> (x1 v x1*))"')

    suite = commands.add_parser("suite", parents=[common], help="run every property check")
    suite.add_argument("--max-points", type=int, default=4)
    suite.add_argument("--random", type=int, dest="random_count", default=DEFAULT_SETTINGS.random_count,
                       help="random posets sampled past the corpus")
    suite.add_argument("--random-points", type=int, default=DEFAULT_SETTINGS.random_points,
                       help="points per random poset (default: one more than --max-points)")
    return parser


def settings_from_args(args: argparse.Namespace) -> Settings:
    """Settings from DEFAULT_SETTINGS with the command-line overrides applied."""
    settings = dataclasses.replace(DEFAULT_SETTINGS, seed=args.seed, max_carrier=args.max_carrier, workers=args.workers)
    if args.command == "suite":
        settings = dataclasses.replace(settings, random_count=args.random_count, random_points=args.random_points)
    return settings


def _dispatch(args: argparse.Namespace, settings: Settings) -> Report:
    if args.command == "gen":
        return cmd_gen(args.max_points, args.out, settings)
    if args.command == "analyze":
        return cmd_analyze(args.file, settings)
    if args.command == "complete":
        return cmd_complete(args.file, args.out, settings, args.dump_relation)
    if args.command == "check":
        return cmd_check(args.eq, args.target, settings)
    return cmd_suite(args.max_points, settings)


def exit_code(error: HeytingError) -> int:
    """Exit code for an error that escaped a command."""
    if isinstance(error, ResourceLimit):
        return EXIT_RESOURCE
    if isinstance(error, (InputError, NotDistributive, NotALattice, NotAPartialOrder)):
        return EXIT_INPUT
    return EXIT_FAILURE


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        report = _dispatch(args, settings_from_args(args))
    except HeytingError as exc:
        code = exit_code(exc)
        log.debug("%s raised", args.command, exc_info=True)
        if args.json:
            print(json.dumps({"command": args.command, "passed": False, "error": exc.to_dict()},
                             indent=2, ensure_ascii=False, default=str))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return code
    print(report.to_json() if args.json else report.to_text())
    return EXIT_PASS if report.passed else EXIT_FAILURE
