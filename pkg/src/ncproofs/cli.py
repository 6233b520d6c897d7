"""Command-line front end: ``ncproofs <command> problem.toml [options]``.

Results go to stdout, diagnostics (iteration progress, warnings, errors) to
stderr. Exit codes: 0 success, 1 proof or search failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import TYPE_CHECKING, Any

from src.ncproofs.casestudy import run_all
from src.ncproofs.commands import (
    EXIT_USAGE,
    CommandResult,
    Settings,
    execute,
    run_verify,
)
from src.ncproofs.config import Config, __version__, get_config
from src.ncproofs.document import dumps, load_document
from src.ncproofs.errors import NCProofError
from src.ncproofs.heuristics import CancellationHeuristic, Heuristic
from src.ncproofs.logic import HerbrandBounds
from src.ncproofs.problem import load_problem

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)


def _configure_logging(level: str) -> None:
    logging.basicConfig(level=level, format="%(message)s", stream=sys.stderr, force=True)


def _add_budget_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("problem", type=Path, help="Problem file (TOML)")
    parser.add_argument("--maxiter", type=int, help="Maximal number of completion iterations")
    parser.add_argument(
        "--quiver-check",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="Check assumptions and claims against the problem's quiver (default: on)",
    )


def build_parser() -> argparse.ArgumentParser:
    """The argument parser with one subcommand per operation."""
    parser = argparse.ArgumentParser(prog="ncproofs", description="Prove operator identities by ideal membership")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Log debugging output")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Log warnings and errors only")
    parser.add_argument("--config", help="Configuration name: development, testing or production")
    sub = parser.add_subparsers(dest="command", required=True)

    certify = sub.add_parser("certify", help="Certify the claims from the assumptions")
    _add_budget_flags(certify)
    certify.add_argument("--json", dest="json_out", help="Write the certificate document here ('-' for stdout)")

    verify = sub.add_parser("verify", help="Re-check a certificate document with plain arithmetic")
    verify.add_argument("problem", type=Path, help="Problem file (TOML)")
    verify.add_argument("document", type=Path, help="Certificate document (JSON)")

    gb = sub.add_parser("gb", help="Compute a partial Groebner basis of the assumptions")
    _add_budget_flags(gb)
    gb.add_argument("--maxdeg", type=int, help="Ignore ambiguities of larger degree")
    gb.add_argument("--interreduce", action="store_true", default=None, help="Interreduce the result")

    reduce = sub.add_parser("reduce", help="Reduce the claims modulo the partial basis")
    _add_budget_flags(reduce)

    find = sub.add_parser("find", help="Search for equivalent expressions of the [find] target")
    _add_budget_flags(find)
    find.add_argument("--heuristic", choices=[h.value for h in Heuristic], help="Override the search heuristic")
    find.add_argument("--degbound", type=int, help="Largest degree tried by the enumerating heuristics")
    find.add_argument("--max-results", type=int, help="Stop the naive search after this many hits")
    find.add_argument("--pure", action="store_true", default=None, help="Drop results still using the target")

    cancel = sub.add_parser("cancel", help="Apply left or right cancellability as in the [cancel] table")
    _add_budget_flags(cancel)
    cancel.add_argument("--heuristic", choices=[h.value for h in CancellationHeuristic], help="Override")
    cancel.add_argument("--degbound", type=int, help="Largest degree tried")

    prove = sub.add_parser("prove", help="Semi-decide the [statement] by Herbrand instances")
    _add_budget_flags(prove)
    prove.add_argument("--degree", type=int, help="Largest word length of instantiated terms")
    prove.add_argument("--summands", type=int, help="Largest number of words per instantiated term")
    prove.add_argument("--coefficient", type=int, help="Largest coefficient magnitude")
    prove.add_argument("--max-clauses", type=int, help="Largest CNF of a disjunction of instances still checked")
    prove.add_argument("--unbounded", action="store_true", help="Grow the bounds forever (may not terminate)")
    prove.add_argument("--max-stages", type=int, help="Stop after this many stages")
    prove.add_argument("--json", dest="json_out", help="Write the proof document here ('-' for stdout)")

    fixtures = sub.add_parser("fixtures", help="Run the bundled case-study corpus")
    fixtures.add_argument("filter", nargs="?", help="Fixture id glob, e.g. 'a5_*'")
    fixtures.add_argument("--dir", dest="fixtures_dir", type=Path, help="Fixture directory")
    return parser


def _herbrand(args: argparse.Namespace, settings: Settings) -> HerbrandBounds | None:
    if args.degree is None and args.summands is None and args.coefficient is None:
        return None
    base = settings.herbrand
    return HerbrandBounds(
        args.degree or base.degree, args.summands or base.summands, args.coefficient or base.coefficient
    )


def _emit(result: CommandResult, json_out: str | None = None) -> int:
    if result.text:
        # stdout carries only the document when it goes there
        print(result.text, file=sys.stderr if json_out == "-" else sys.stdout)
    if json_out == "-":
        sys.stdout.write(dumps(result.payload))
    elif json_out:
        Path(json_out).write_text(dumps(result.payload), encoding="utf-8")
        logger.info("Wrote %s", json_out)
    return result.exit_code


def _dispatch(args: argparse.Namespace, config: type[Config]) -> int:
    if args.command == "fixtures":
        report = run_all(args.filter, args.fixtures_dir or config.FIXTURES_DIR, config)
        print(report.text())
        return report.exit_code
    problem = load_problem(args.problem)
    if args.command == "verify":
        return _emit(run_verify(problem, load_document(args.document)))

    overrides: dict[str, Any] = {"maxiter": args.maxiter, "quiver_check": args.quiver_check}
    kwargs: dict[str, Any] = {}
    if args.command == "gb":
        overrides["interreduce"] = args.interreduce
        kwargs["maxdeg"] = args.maxdeg
    elif args.command == "find":
        overrides["degbound"] = args.degbound
        kwargs.update(heuristic=args.heuristic, pure=args.pure, max_results=args.max_results)
    elif args.command == "cancel":
        overrides["degbound"] = args.degbound
        kwargs["heuristic"] = args.heuristic
    elif args.command == "prove":
        overrides["max_clauses"] = args.max_clauses
        kwargs.update(unbounded=args.unbounded, max_stages=args.max_stages)
    settings = Settings.resolve(problem, config, **overrides)
    if args.command == "prove":
        settings = Settings.resolve(problem, config, **overrides, herbrand=_herbrand(args, settings))
    result = execute(args.command, problem, settings, **kwargs)
    return _emit(result, getattr(args, "json_out", None))


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``ncproofs`` console script.

    Returns:
        The process exit code.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = get_config(args.config)
    except KeyError as exc:
        parser.error(str(exc.args[0]))
    level = "DEBUG" if args.verbose else "WARNING" if args.quiet else config.LOG_LEVEL
    _configure_logging(level)
    try:
        return _dispatch(args, config)
    except NCProofError as exc:
        logger.error("Error: %s", exc)  # noqa: TRY400
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
