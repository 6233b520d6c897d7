"""Problem files: TOML documents declaring an algebra, assumptions and what to do with them.

Example::

    [algebra]
    variables = ["a", "b", "c", "a_adj", "b_adj", "c_adj"]
    involution = "_adj"

    [assumptions]
    pinv = [["a", "b", "a_adj", "b_adj"], ["a", "c", "a_adj", "c_adj"]]
    add_adj = true

    [claims]
    polynomials = ["b - c"]

A ``[statement]`` table with a ``text`` key replaces algebra, assumptions and
claims by an operator statement (see :mod:`src.ncproofs.logic.parser`).
"""

from __future__ import annotations

import logging
import tomllib
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from src.ncproofs.errors import NCProofError, ProblemFileError
from src.ncproofs.freealg import (
    AdjointMap,
    ConjugationMap,
    FreeAlgebra,
    Polynomial,
    add_adj,
    add_tr_c,
    identity_relations,
    pinv,
)
from src.ncproofs.heuristics import CancellationHeuristic, Heuristic
from src.ncproofs.logic import HerbrandBounds, Statement, parse_statement
from src.ncproofs.order import MonomialOrder
from src.ncproofs.quiver import Quiver

logger = logging.getLogger(__name__)

_TOP_LEVEL = {"algebra", "quiver", "assumptions", "claims", "statement", "find", "cancel", "options"}


@dataclass(frozen=True)
class FindSection:
    """Parameters of ``find``: the target and the search heuristic."""

    target: Polynomial
    heuristic: Heuristic = Heuristic.GROEBNER
    prefix: Polynomial | None = None
    suffix: Polynomial | None = None
    degbound: int | None = None
    max_results: int | None = 1
    order: MonomialOrder | None = None
    pure: bool = False


@dataclass(frozen=True)
class CancelSection:
    """Parameters of ``cancel``: cancel ``a`` on ``side`` of ``a*b`` (left) or ``b*a`` (right)."""

    side: str
    a: Polynomial
    b: Polynomial
    heuristic: CancellationHeuristic = CancellationHeuristic.SUBALGEBRA
    degbound: int | None = None


@dataclass(frozen=True)
class Options:
    """Budgets set in the problem file; ``None`` defers to the command line or configuration."""

    maxiter: int | None = None
    degbound: int | None = None
    max_clauses: int | None = None
    herbrand: HerbrandBounds | None = None
    interreduce: bool = False
    quiver_check: bool = True


@dataclass(frozen=True)
class Problem:
    """A loaded problem file."""

    algebra: FreeAlgebra
    order: MonomialOrder
    assumptions: tuple[Polynomial, ...] = ()
    claims: tuple[Polynomial, ...] = ()
    adjoint: AdjointMap | None = None
    quiver: Quiver | None = None
    statement: Statement | None = None
    find: FindSection | None = None
    cancel: CancelSection | None = None
    options: Options = field(default_factory=Options)
    source: str = "<string>"

    @property
    def name(self) -> str:
        """Short label used in messages."""
        return Path(self.source).parent.name if self.source.endswith("problem.toml") else self.source


def _fail(source: str, where: str, message: object) -> ProblemFileError:
    return ProblemFileError(f"{source}: {where}: {message}")


def _table(document: Mapping[str, Any], name: str, source: str) -> Mapping[str, Any]:
    value = document.get(name, {})
    if not isinstance(value, Mapping):
        raise _fail(source, name, "expected a table")
    return value


def _string_list(value: object, where: str, source: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(item, str) for item in value):
        raise _fail(source, where, "expected a list of strings")
    return list(value)


def _optional_int(table: Mapping[str, Any], key: str, where: str, source: str) -> int | None:
    value = table.get(key)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise _fail(source, f"{where}.{key}", "expected a non-negative integer")
    return value


def _polynomial(algebra: FreeAlgebra, text: object, where: str, source: str) -> Polynomial:
    if not isinstance(text, str):
        raise _fail(source, where, "expected a polynomial string")
    try:
        return algebra.parse(text)
    except NCProofError as exc:
        raise _fail(source, where, exc) from exc


def _order(algebra: FreeAlgebra, spec: object, where: str, source: str) -> MonomialOrder:
    try:
        return MonomialOrder.from_spec(algebra, spec)  # type: ignore[arg-type]
    except (NCProofError, TypeError) as exc:
        raise _fail(source, where, exc) from exc


def _algebra(table: Mapping[str, Any], source: str) -> tuple[FreeAlgebra, AdjointMap | None]:
    if "variables" not in table:
        raise _fail(source, "algebra", "missing 'variables'")
    try:
        algebra = FreeAlgebra(_string_list(table["variables"], "algebra.variables", source))
    except NCProofError as exc:
        raise _fail(source, "algebra.variables", exc) from exc
    involution = table.get("involution")
    if involution is None:
        return algebra, None
    if not isinstance(involution, str):
        raise _fail(source, "algebra.involution", "expected a suffix such as '_adj'")
    self_adjoint = _string_list(table.get("self_adjoint", []), "algebra.self_adjoint", source)
    try:
        return algebra, AdjointMap.from_suffix(algebra, involution, self_adjoint)
    except NCProofError as exc:
        raise _fail(source, "algebra.involution", exc) from exc


def _quiver(table: Mapping[str, Any], source: str) -> Quiver | None:
    if not table:
        return None
    edges = table.get("edges", [])
    if not isinstance(edges, list):
        raise _fail(source, "quiver.edges", "expected a list of [source, target, label] triples")
    quiver = Quiver()
    for position, edge in enumerate(edges):
        if not isinstance(edge, list) or len(edge) != 3 or not all(isinstance(i, str) for i in edge):  # noqa: PLR2004
            raise _fail(source, f"quiver.edges[{position}]", "expected [source, target, label]")
        quiver.add_edge(edge[0], edge[1], edge[2])
    return quiver


def _pinv_list(algebra: FreeAlgebra, entries: object, where: str, source: str) -> list[Polynomial]:
    if not isinstance(entries, list):
        raise _fail(source, where, "expected a list of [a, b, a_adj, b_adj] entries")
    result: list[Polynomial] = []
    for position, entry in enumerate(entries):
        if not isinstance(entry, list) or len(entry) != 4:  # noqa: PLR2004
            raise _fail(source, f"{where}[{position}]", "expected four polynomials [a, b, a_adj, b_adj]")
        a, b, a_adj, b_adj = (_polynomial(algebra, item, f"{where}[{position}]", source) for item in entry)
        result.extend(pinv(a, b, a_adj, b_adj))
    return result


def _identities(algebra: FreeAlgebra, entries: object, source: str) -> list[Polynomial]:
    if not isinstance(entries, list):
        raise _fail(source, "assumptions.identity", "expected a list of tables")
    result: list[Polynomial] = []
    for position, entry in enumerate(entries):
        where = f"assumptions.identity[{position}]"
        if not isinstance(entry, Mapping) or "i" not in entry:
            raise _fail(source, where, "expected a table with at least 'i'")
        try:
            result.extend(
                identity_relations(
                    entry["i"],
                    entry.get("i_adj", f"{entry['i']}_adj"),
                    algebra,
                    right_units=_string_list(entry.get("right_units", []), f"{where}.right_units", source),
                    left_units=_string_list(entry.get("left_units", []), f"{where}.left_units", source),
                )
            )
        except NCProofError as exc:
            raise _fail(source, where, exc) from exc
    return result


def _assumptions(
    algebra: FreeAlgebra, table: Mapping[str, Any], adjoint: AdjointMap | None, source: str
) -> list[Polynomial]:
    polys = [
        _polynomial(algebra, text, f"assumptions.polynomials[{i}]", source)
        for i, text in enumerate(table.get("polynomials", []))
    ]
    polys.extend(_pinv_list(algebra, table.get("pinv", []), "assumptions.pinv", source))
    polys.extend(_identities(algebra, table.get("identity", []), source))
    if table.get("add_adj", False):
        if adjoint is None:
            raise _fail(source, "assumptions.add_adj", "needs [algebra] involution")
        try:
            polys = add_adj(polys, adjoint)
        except NCProofError as exc:
            raise _fail(source, "assumptions.add_adj", exc) from exc
    if table.get("add_tr_c", False):
        polys = add_tr_c(polys, ConjugationMap.from_suffixes(algebra))
    return polys


def _claims(algebra: FreeAlgebra, table: Mapping[str, Any], source: str) -> list[Polynomial]:
    claims = [
        _polynomial(algebra, text, f"claims.polynomials[{i}]", source)
        for i, text in enumerate(table.get("polynomials", []))
    ]
    claims.extend(_pinv_list(algebra, table.get("pinv", []), "claims.pinv", source))
    return claims


def _find(algebra: FreeAlgebra, table: Mapping[str, Any], source: str) -> FindSection | None:
    if not table:
        return None
    if "target" not in table:
        raise _fail(source, "find", "missing 'target'")
    try:
        heuristic = Heuristic(table.get("heuristic", Heuristic.GROEBNER))
    except ValueError as exc:
        raise _fail(source, "find.heuristic", exc) from exc
    max_results = table.get("max_results", 1)
    if max_results == "all":
        max_results = None
    elif isinstance(max_results, bool) or not isinstance(max_results, int) or max_results < 1:
        raise _fail(source, "find.max_results", "expected a positive integer or 'all'")
    return FindSection(
        target=_polynomial(algebra, table["target"], "find.target", source),
        heuristic=heuristic,
        prefix=_polynomial(algebra, table["prefix"], "find.prefix", source) if "prefix" in table else None,
        suffix=_polynomial(algebra, table["suffix"], "find.suffix", source) if "suffix" in table else None,
        degbound=_optional_int(table, "degbound", "find", source),
        max_results=max_results,
        order=_order(algebra, table["order"], "find.order", source) if "order" in table else None,
        pure=bool(table.get("pure", False)),
    )


def _cancel(algebra: FreeAlgebra, table: Mapping[str, Any], source: str) -> CancelSection | None:
    if not table:
        return None
    side = table.get("side", "left")
    if side not in ("left", "right"):
        raise _fail(source, "cancel.side", "expected 'left' or 'right'")
    for key in ("a", "b"):
        if key not in table:
            raise _fail(source, "cancel", f"missing {key!r}")
    try:
        heuristic = CancellationHeuristic(table.get("heuristic", CancellationHeuristic.SUBALGEBRA))
    except ValueError as exc:
        raise _fail(source, "cancel.heuristic", exc) from exc
    return CancelSection(
        side=side,
        a=_polynomial(algebra, table["a"], "cancel.a", source),
        b=_polynomial(algebra, table["b"], "cancel.b", source),
        heuristic=heuristic,
        degbound=_optional_int(table, "degbound", "cancel", source),
    )


def _options(table: Mapping[str, Any], source: str) -> Options:
    herbrand = table.get("herbrand")
    bounds = None
    if herbrand is not None:
        if not isinstance(herbrand, Mapping):
            raise _fail(source, "options.herbrand", "expected a table with degree, summands, coefficient")
        try:
            bounds = HerbrandBounds(
                int(herbrand.get("degree", 3)), int(herbrand.get("summands", 1)), int(herbrand.get("coefficient", 1))
            )
        except (NCProofError, TypeError, ValueError) as exc:
            raise _fail(source, "options.herbrand", exc) from exc
    return Options(
        maxiter=_optional_int(table, "maxiter", "options", source),
        degbound=_optional_int(table, "degbound", "options", source),
        max_clauses=_optional_int(table, "max_clauses", "options", source),
        herbrand=bounds,
        interreduce=bool(table.get("interreduce", False)),
        quiver_check=bool(table.get("quiver_check", True)),
    )


def _statement(table: Mapping[str, Any], source: str) -> Statement:
    text = table.get("text")
    if not isinstance(text, str):
        raise _fail(source, "statement", "missing 'text'")
    try:
        return parse_statement(text)
    except NCProofError as exc:
        raise _fail(source, "statement.text", exc) from exc


def parse_problem(text: str, source: str = "<string>") -> Problem:
    """Load a problem from TOML text.

    Raises:
        ProblemFileError: On TOML syntax errors, unknown tables, bad polynomials
            or when both claims and a statement are given.
    """
    try:
        document = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise _fail(source, "TOML", exc) from exc
    unknown = sorted(set(document) - _TOP_LEVEL)
    if unknown:
        raise _fail(source, unknown[0], "unknown table")
    if "claims" in document and "statement" in document:
        raise _fail(source, "statement", "give either claims or a statement, not both")

    options = _options(_table(document, "options", source), source)
    if "statement" in document:
        statement = _statement(_table(document, "statement", source), source)
        algebra = statement.algebra
        return Problem(
            algebra=algebra,
            order=MonomialOrder(algebra),
            adjoint=statement.adjoint,
            statement=statement,
            options=options,
            source=source,
        )

    algebra_table = _table(document, "algebra", source)
    algebra, adjoint = _algebra(algebra_table, source)
    order = _order(algebra, algebra_table.get("order"), "algebra.order", source)
    problem = Problem(
        algebra=algebra,
        order=order,
        assumptions=tuple(_assumptions(algebra, _table(document, "assumptions", source), adjoint, source)),
        claims=tuple(_claims(algebra, _table(document, "claims", source), source)),
        adjoint=adjoint,
        quiver=_quiver(_table(document, "quiver", source), source),
        find=_find(algebra, _table(document, "find", source), source),
        cancel=_cancel(algebra, _table(document, "cancel", source), source),
        options=options,
        source=source,
    )
    logger.debug(
        "Loaded %s: %d assumptions, %d claims over %r", source, len(problem.assumptions), len(problem.claims), algebra
    )
    return problem


def load_problem(path: str | Path) -> Problem:
    """Read and parse a problem file.

    Raises:
        ProblemFileError: If the file cannot be read or parsed.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise _fail(str(path), "file", exc) from exc
    return parse_problem(text, str(path))


def format_list(polys: Sequence[Polynomial], order: MonomialOrder | None = None) -> str:
    """Render polynomials as ``[p1, p2, ...]``."""
    return "[" + ", ".join(p.format(order) for p in polys) + "]"
