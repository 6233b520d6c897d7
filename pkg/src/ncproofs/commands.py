"""Command runners shared by the CLI, the HTTP handlers and the fixture corpus.

Each runner takes a loaded :class:`Problem` and resolved :class:`Settings` and
returns a :class:`CommandResult`: the exit code, the human-readable text for
stdout and a JSON-ready payload.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field, replace
from typing import Any

from src.ncproofs.certify import certify
from src.ncproofs.config import Config
from src.ncproofs.document import certify_document, prove_document, verify_document
from src.ncproofs.errors import UsageError
from src.ncproofs.freealg import Polynomial
from src.ncproofs.gb import NCIdeal
from src.ncproofs.heuristics import (
    CancellationHeuristic,
    Heuristic,
    SearchSpec,
    apply_left_cancellability,
    apply_right_cancellability,
    find_equivalent_expression,
)
from src.ncproofs.logic import HerbrandBounds, semi_decide
from src.ncproofs.problem import Problem, format_list

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


@dataclass(frozen=True)
class Settings:
    """Budgets of one command after merging flags, problem options and configuration."""

    maxiter: int = 10
    degbound: int = 5
    progress_interval: int = 5
    max_clauses: int = 64
    herbrand: HerbrandBounds = field(default_factory=HerbrandBounds)
    quiver_check: bool = True
    interreduce: bool = False

    @classmethod
    def resolve(cls, problem: Problem, config: type[Config] = Config, **overrides: Any) -> Settings:
        """Command-line overrides beat problem options, which beat configuration.

        ``None`` overrides are ignored.
        """
        options = problem.options
        settings = cls(
            maxiter=options.maxiter if options.maxiter is not None else config.MAXITER,
            degbound=options.degbound if options.degbound is not None else config.DEGBOUND,
            progress_interval=config.PROGRESS_INTERVAL,
            max_clauses=options.max_clauses if options.max_clauses is not None else config.MAX_CLAUSES,
            herbrand=options.herbrand
            or HerbrandBounds(config.HERBRAND_DEGREE, config.HERBRAND_SUMMANDS, config.HERBRAND_COEFFICIENT),
            quiver_check=options.quiver_check,
            interreduce=options.interreduce,
        )
        given = {key: value for key, value in overrides.items() if value is not None}
        unknown = sorted(set(given) - set(cls.__dataclass_fields__))
        if unknown:
            msg = f"Unknown setting {unknown[0]!r}"
            raise UsageError(msg)
        return replace(settings, **given)


@dataclass(frozen=True)
class CommandResult:
    """Exit code, stdout text and machine-readable payload of one command."""

    exit_code: int
    text: str
    payload: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        """Whether the command succeeded."""
        return self.exit_code == EXIT_OK


def run_certify(problem: Problem, settings: Settings) -> CommandResult:
    """Certify every claim of the problem; the payload is the certificate document."""
    if not problem.claims:
        msg = f"{problem.source}: the problem has no claims to certify"
        raise UsageError(msg)
    start = time.perf_counter()
    report = certify(
        problem.assumptions,
        problem.claims,
        maxiter=settings.maxiter,
        quiver=problem.quiver if settings.quiver_check else None,
        order=problem.order,
        progress_interval=settings.progress_interval,
    )
    document = certify_document(problem, report, time.perf_counter() - start)
    text = report.pretty() if report.proved else "Failed! Not all ideal memberships could be verified."
    return CommandResult(EXIT_OK if report.proved else EXIT_FAILED, text, document)


def run_verify(problem: Problem, document: Mapping[str, Any]) -> CommandResult:
    """Re-expand the certificates of ``document`` and compare them with the problem's claims."""
    checks = verify_document(problem, document)
    lines = [f"[OK] {c.claim}" if c.ok else f"[FAILED] {c.claim}: {c.reason}" for c in checks]
    verified = all(check.ok for check in checks)
    payload = {
        "status": "verified" if verified else "mismatch",
        "claims": [{"claim": c.claim, "ok": c.ok, "reason": c.reason} for c in checks],
    }
    return CommandResult(EXIT_OK if verified else EXIT_FAILED, "\n".join(lines), payload)


def run_gb(problem: Problem, settings: Settings, maxdeg: int | None = None) -> CommandResult:
    """Compute a partial Gröbner basis of the assumptions."""
    ideal = NCIdeal(problem.assumptions, problem.order, problem.algebra)
    basis = ideal.groebner_basis(settings.maxiter, maxdeg, interreduce=settings.interreduce)
    polys = [traced.poly for traced in basis]
    payload = {
        "basis": [p.format(problem.order) for p in polys],
        "iterations": ideal.iterations,
        "complete": ideal.is_complete,
    }
    return CommandResult(EXIT_OK, format_list(polys, problem.order), payload)


def run_reduce(problem: Problem, settings: Settings, polys: list[Polynomial] | None = None) -> CommandResult:
    """Normal forms of the claims (or of ``polys``) modulo the partial basis after ``maxiter`` iterations."""
    targets = polys if polys is not None else list(problem.claims)
    if not targets:
        msg = f"{problem.source}: nothing to reduce"
        raise UsageError(msg)
    ideal = NCIdeal(problem.assumptions, problem.order, problem.algebra)
    rows = []
    for target in targets:
        normal = ideal.reduced_form(target, maxiter=settings.maxiter).poly
        rows.append({"polynomial": target.format(problem.order), "normal_form": normal.format(problem.order)})
    text = "\n".join(row["normal_form"] for row in rows)
    return CommandResult(EXIT_OK, text, {"reduced": rows})


def _is_pure(candidate: Polynomial, target: Polynomial) -> bool:
    forbidden = target.variables()
    target_words = {word for word, _ in target.items()}
    for word, _ in candidate.items():
        if word in target_words:
            continue
        if forbidden & set(candidate.algebra.word_names(word)):
            return False
    return True


def run_find(
    problem: Problem,
    settings: Settings,
    heuristic: Heuristic | str | None = None,
    *,
    pure: bool | None = None,
    max_results: int | None = None,
) -> CommandResult:
    """Search for ideal elements ``±(target - g)`` as set up in the ``[find]`` table."""
    section = problem.find
    if section is None:
        msg = f"{problem.source}: the problem has no [find] table"
        raise UsageError(msg)
    spec = SearchSpec(
        section.target,
        Heuristic(heuristic or section.heuristic),
        prefix=section.prefix,
        suffix=section.suffix,
        degbound=section.degbound if section.degbound is not None else settings.degbound,
        order=section.order,
        maxiter=settings.maxiter,
        quiver=problem.quiver if settings.quiver_check else None,
        max_results=max_results if max_results is not None else section.max_results,
    )
    ideal = NCIdeal(problem.assumptions, problem.order, problem.algebra)
    results = find_equivalent_expression(ideal, spec)
    keep_pure = section.pure if pure is None else pure
    if keep_pure:
        results = [poly for poly in results if _is_pure(poly, section.target)]
    order = section.order if section.order is not None else problem.order
    payload = {"results": [p.format(order) for p in results], "heuristic": str(spec.heuristic)}
    return CommandResult(EXIT_OK if results else EXIT_FAILED, format_list(results, order), payload)


def run_cancel(
    problem: Problem, settings: Settings, heuristic: CancellationHeuristic | str | None = None
) -> CommandResult:
    """Apply left or right cancellability as set up in the ``[cancel]`` table."""
    section = problem.cancel
    if section is None:
        msg = f"{problem.source}: the problem has no [cancel] table"
        raise UsageError(msg)
    ideal = NCIdeal(problem.assumptions, problem.order, problem.algebra)
    apply = apply_left_cancellability if section.side == "left" else apply_right_cancellability
    results = apply(
        ideal,
        section.a,
        section.b,
        heuristic=CancellationHeuristic(heuristic or section.heuristic),
        maxiter=settings.maxiter,
        degbound=section.degbound if section.degbound is not None else settings.degbound,
    )
    payload = {"results": [p.format(problem.order) for p in results], "side": section.side}
    return CommandResult(EXIT_OK if results else EXIT_FAILED, format_list(results, problem.order), payload)


def run_prove(
    problem: Problem, settings: Settings, *, unbounded: bool = False, max_stages: int | None = None
) -> CommandResult:
    """Run the semi-decision procedure on the problem's statement."""
    if problem.statement is None:
        msg = f"{problem.source}: the problem has no [statement] table"
        raise UsageError(msg)
    start = time.perf_counter()
    result = semi_decide(
        problem.statement,
        settings.herbrand,
        settings.maxiter,
        settings.max_clauses,
        unbounded=unbounded,
        max_stages=max_stages,
    )
    document = prove_document(problem, result, time.perf_counter() - start)
    if result.proved:
        lines = ["true"]
        for witness in result.witness_text():
            lines.extend(f"  {name} = {term}" for name, term in witness.items())
    else:
        lines = [f"exhausted after {result.stages} stages ({result.instances_tried} instances)"]
    return CommandResult(EXIT_OK if result.proved else EXIT_FAILED, "\n".join(lines), document)


COMMANDS: dict[str, Callable[..., CommandResult]] = {
    "certify": run_certify,
    "gb": run_gb,
    "reduce": run_reduce,
    "find": run_find,
    "cancel": run_cancel,
    "prove": run_prove,
}


def execute(command: str, problem: Problem, settings: Settings, **kwargs: Any) -> CommandResult:
    """Run a command other than ``verify`` by name.

    Raises:
        UsageError: If the command is unknown.
    """
    try:
        runner = COMMANDS[command]
    except KeyError:
        msg = f"Unknown command {command!r}; expected one of {sorted(COMMANDS)}"
        raise UsageError(msg) from None
    logger.debug("Running %s on %s", command, problem.source)
    return runner(problem, settings, **kwargs)
