"""Regression corpus: worked operator statements as problem files with golden expectations.

Every fixture lives in ``<fixtures>/<id>/`` with a ``problem.toml`` and an
``expected.json``::

    {
      "provenance": "where the expectation comes from",
      "command": "certify",
      "args": {"maxiter": 20},
      "exit_code": 0,
      "contains": ["..."], "equals": ["..."], "first": "...",
      "certificate": [["1", 0, "c"], ["d", 1, "1"]],
      "pretty": "...", "min_iterations": 5, "witness": {"b": "..."},
      "error_contains": "...", "time_budget": 10
    }

Polynomials in the goldens are compared as polynomials up to sign, not as strings.
"""

from __future__ import annotations

import fnmatch
import json
import logging
import time
from collections.abc import Mapping
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import TYPE_CHECKING, Any

from src.ncproofs.certificate import Certificate
from src.ncproofs.commands import EXIT_USAGE, Settings, execute, run_verify
from src.ncproofs.config import Config
from src.ncproofs.errors import NCProofError, ProblemFileError
from src.ncproofs.logic import HerbrandBounds
from src.ncproofs.problem import load_problem

if TYPE_CHECKING:
    from src.ncproofs.commands import CommandResult
    from src.ncproofs.freealg import FreeAlgebra, Polynomial
    from src.ncproofs.order import MonomialOrder
    from src.ncproofs.problem import Problem

logger = logging.getLogger(__name__)

DEFAULT_TIME_BUDGET = 10.0
_SETTINGS = {f.name for f in fields(Settings)}


@dataclass(frozen=True)
class Fixture:
    """One corpus entry."""

    id: str
    path: Path
    expected: Mapping[str, Any]

    @property
    def command(self) -> str:
        """Command the fixture runs."""
        return str(self.expected.get("command", "certify"))

    @property
    def provenance(self) -> str:
        """Where the expectation comes from."""
        return str(self.expected.get("provenance", ""))


@dataclass
class FixtureOutcome:
    """Result of running one fixture."""

    fixture_id: str
    ok: bool
    seconds: float
    failures: list[str] = field(default_factory=list)

    def line(self) -> str:
        """``[OK] id (0.12s)`` or ``[FAILED] id: reasons``."""
        if self.ok:
            return f"[OK] {self.fixture_id} ({self.seconds:.2f}s)"
        return f"[FAILED] {self.fixture_id}: {'; '.join(self.failures)}"


@dataclass
class CorpusReport:
    """Outcomes of a corpus run."""

    outcomes: list[FixtureOutcome] = field(default_factory=list)

    @property
    def passed(self) -> int:
        """Number of passing fixtures."""
        return sum(1 for outcome in self.outcomes if outcome.ok)

    @property
    def failed(self) -> int:
        """Number of failing fixtures."""
        return len(self.outcomes) - self.passed

    @property
    def exit_code(self) -> int:
        """0 when every fixture passed (and at least one ran), else 1."""
        return 0 if self.outcomes and not self.failed else 1

    def text(self) -> str:
        """One line per fixture and a summary line."""
        total = sum(outcome.seconds for outcome in self.outcomes)
        lines = [outcome.line() for outcome in self.outcomes]
        lines.append(f"{self.passed} passed, {self.failed} failed in {total:.2f}s")
        return "\n".join(lines)


def discover(fixtures_dir: str | Path, pattern: str | None = None) -> list[Fixture]:
    """Fixtures under ``fixtures_dir`` whose id matches the glob ``pattern``, sorted by id.

    Raises:
        ProblemFileError: If an ``expected.json`` cannot be read.
    """
    root = Path(fixtures_dir)
    found: list[Fixture] = []
    if not root.is_dir():
        logger.warning("Fixture directory %s does not exist", root)
        return found
    for directory in sorted(p for p in root.iterdir() if p.is_dir()):
        if pattern and not fnmatch.fnmatch(directory.name, pattern):
            continue
        expected_path = directory / "expected.json"
        if not expected_path.exists():
            continue
        try:
            expected = json.loads(expected_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            msg = f"{expected_path}: {exc}"
            raise ProblemFileError(msg) from exc
        found.append(Fixture(directory.name, directory, expected))
    return found


def _polys(texts: list[str], algebra: FreeAlgebra) -> list[Polynomial]:
    return [algebra.parse(text) for text in texts]


def _signless(polys: list[Polynomial], order: MonomialOrder) -> set[Polynomial]:
    """Goldens are printed as found, results are monic: compare up to sign."""
    return {p if p.is_zero() or order.leading_term(p)[0] > 0 else -p for p in polys}


def _outputs(command: str, payload: Mapping[str, Any]) -> list[str]:
    if command == "gb":
        return list(payload["basis"])
    if command in ("find", "cancel"):
        return list(payload["results"])
    if command == "reduce":
        return [row["normal_form"] for row in payload["reduced"]]
    if command == "certify":
        return list(payload["claims"])
    return []


def _compare_lists(fixture: Fixture, problem: Problem, result: CommandResult) -> list[str]:
    failures: list[str] = []
    algebra = problem.algebra
    order = problem.order
    outputs = _polys(_outputs(fixture.command, result.payload), algebra)
    expected = fixture.expected
    if "equals" in expected:
        wanted = _polys(expected["equals"], algebra)
        if _signless(outputs, order) != _signless(wanted, order) or len(outputs) != len(wanted):
            failures.append(f"expected {expected['equals']}, got {[p.format() for p in outputs]}")
    for text in expected.get("contains", []):
        if not _signless([algebra.parse(text)], order) <= _signless(outputs, order):
            failures.append(f"missing {text}")
    if "first" in expected and (
        not outputs or _signless(outputs[:1], order) != _signless([algebra.parse(expected["first"])], order)
    ):
        failures.append(f"expected {expected['first']} first, got {[p.format() for p in outputs]}")
    return failures


def _compare_certify(fixture: Fixture, problem: Problem, result: CommandResult) -> list[str]:
    failures: list[str] = []
    expected = fixture.expected
    payload = result.payload
    if "certificate" in expected:
        records = payload["certificates"][0]
        got = []
        if records is not None:
            got = Certificate.from_records(records, problem.algebra).as_tuples(problem.algebra)
        wanted = [tuple(item) for item in expected["certificate"]]
        if got != wanted:
            failures.append(f"certificate {got} != {wanted}")
    if "pretty" in expected and " ".join(result.text.split()) != " ".join(str(expected["pretty"]).split()):
        failures.append(f"pretty print {result.text!r}")
    if payload["iterations"] < expected.get("min_iterations", 0):
        failures.append(f"only {payload['iterations']} iterations")
    if expected.get("integer_clean") and not all(payload["integer_clean"]):
        failures.append("non-integer certificate coefficients")
    if result.ok and not run_verify(problem, payload).ok:
        failures.append("the emitted document does not verify")
    return failures


def _compare_prove(fixture: Fixture, problem: Problem, result: CommandResult) -> list[str]:
    wanted = fixture.expected.get("witness")
    if not wanted:
        return []
    witnesses = result.payload.get("witnesses", [])
    algebra = problem.algebra
    for witness in witnesses:
        if all(
            name in witness and algebra.parse(witness[name]) == algebra.parse(term) for name, term in wanted.items()
        ):
            return []
    return [f"no witness {wanted} among {witnesses}"]


def _split_args(args: Mapping[str, Any]) -> tuple[dict[str, Any], dict[str, Any]]:
    settings = {key: value for key, value in args.items() if key in _SETTINGS}
    kwargs = {key: value for key, value in args.items() if key not in _SETTINGS}
    return settings, kwargs


def run_fixture(fixture: Fixture, config: type[Config] = Config) -> FixtureOutcome:
    """Load, run and compare one fixture; input errors count as exit code 2."""
    expected = fixture.expected
    start = time.perf_counter()
    failures: list[str] = []
    try:
        problem = load_problem(fixture.path / "problem.toml")
        overrides, kwargs = _split_args(expected.get("args", {}))
        if "herbrand" in overrides:
            overrides["herbrand"] = HerbrandBounds(**overrides["herbrand"])
        settings = Settings.resolve(problem, config, **overrides)
        result = execute(fixture.command, problem, settings, **kwargs)
    except NCProofError as exc:
        seconds = time.perf_counter() - start
        if expected.get("exit_code", 0) != EXIT_USAGE:
            return FixtureOutcome(fixture.id, ok=False, seconds=seconds, failures=[f"error: {exc}"])
        needle = expected.get("error_contains")
        if needle and needle not in str(exc):
            failures.append(f"error {exc!s} lacks {needle!r}")
        return FixtureOutcome(fixture.id, ok=not failures, seconds=seconds, failures=failures)
    seconds = time.perf_counter() - start

    if result.exit_code != expected.get("exit_code", 0):
        failures.append(f"exit code {result.exit_code}, expected {expected.get('exit_code', 0)}")
    try:
        failures.extend(_compare_lists(fixture, problem, result))
        if fixture.command == "certify":
            failures.extend(_compare_certify(fixture, problem, result))
        elif fixture.command == "prove":
            failures.extend(_compare_prove(fixture, problem, result))
    except NCProofError as exc:
        failures.append(f"bad golden: {exc}")
    budget = float(expected.get("time_budget", DEFAULT_TIME_BUDGET))
    if seconds > budget:
        failures.append(f"took {seconds:.2f}s, budget {budget:.0f}s")
    return FixtureOutcome(fixture.id, ok=not failures, seconds=seconds, failures=failures)


def run_all(
    pattern: str | None = None, fixtures_dir: str | Path | None = None, config: type[Config] = Config
) -> CorpusReport:
    """Run every fixture matching ``pattern`` (all when ``None``)."""
    report = CorpusReport()
    for fixture in discover(fixtures_dir or config.FIXTURES_DIR, pattern):
        logger.info("Running %s (%s)", fixture.id, fixture.provenance)
        outcome = run_fixture(fixture, config)
        report.outcomes.append(outcome)
        logger.info("%s", outcome.line())
    return report
