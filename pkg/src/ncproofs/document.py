"""Certificate documents: the JSON record of a certification run and its independent re-verification."""

from __future__ import annotations

import json
import logging
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any

from src.ncproofs.certificate import Certificate, expand_cofactors
from src.ncproofs.config import __version__
from src.ncproofs.errors import ProblemFileError

if TYPE_CHECKING:
    from src.ncproofs.certify import CertifyReport
    from src.ncproofs.logic import SemiDecisionResult
    from src.ncproofs.problem import Problem

logger = logging.getLogger(__name__)

_REQUIRED = ("status", "claims", "certificates", "integer_clean", "version")


def certify_document(problem: Problem, report: CertifyReport, seconds: float) -> dict[str, Any]:
    """The machine-readable record of a :func:`certify` run.

    Only ``timing`` differs between two runs on the same problem.
    """
    algebra = problem.algebra
    return {
        "kind": "certify",
        "version": __version__,
        "status": str(report.status),
        "iterations": report.iterations_used,
        "variables": list(algebra.names),
        "assumptions": [p.format() for p in report.assumptions],
        "claims": [c.format() for c in report.claims],
        "certificates": [None if cert is None else cert.to_records(algebra) for cert in report.proofs],
        "integer_clean": list(report.integer_clean),
        "timing": {"seconds": round(seconds, 6)},
    }


def prove_document(problem: Problem, result: SemiDecisionResult, seconds: float) -> dict[str, Any]:
    """The machine-readable record of a semi-decision run; one entry per proved clause."""
    algebra = problem.algebra
    clauses = [
        {
            "clause": str(task.clause) if task.clause is not None else None,
            "generators": [g.format() for g in task.generators],
            "candidates": [c.format() for c in task.candidates],
            "candidate_index": outcome.candidate_index,
            "certificate": outcome.certificate.to_records(algebra) if outcome.certificate is not None else None,
        }
        for task, outcome in zip(result.tasks, result.results, strict=True)
    ]
    return {
        "kind": "prove",
        "version": __version__,
        "status": str(result.verdict),
        "statement": str(problem.statement) if problem.statement is not None else None,
        "variables": list(algebra.names),
        "witnesses": result.witness_text(),
        "clauses": clauses,
        "stages": result.stages,
        "instances_tried": result.instances_tried,
        "timing": {"seconds": round(seconds, 6)},
    }


def dumps(document: Mapping[str, Any]) -> str:
    """Serialize with sorted keys and two-space indentation."""
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def load_document(path: str | Path) -> dict[str, Any]:
    """Read a certificate document.

    Raises:
        ProblemFileError: If the file is unreadable, not JSON or lacks a required field.
    """
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        msg = f"{path}: cannot read certificate document: {exc}"
        raise ProblemFileError(msg) from exc
    return validate_document(document, str(path))


def validate_document(document: object, source: str = "<document>") -> dict[str, Any]:
    """Check the shape of a certify document.

    Raises:
        ProblemFileError: If a required field is missing or not a list, or the lists disagree in length.
    """
    if not isinstance(document, dict):
        msg = f"{source}: expected a JSON object"
        raise ProblemFileError(msg)
    missing = [name for name in _REQUIRED if name not in document]
    if missing:
        msg = f"{source}: missing field {missing[0]!r}"
        raise ProblemFileError(msg)
    for name in ("claims", "certificates"):
        if not isinstance(document[name], list):
            msg = f"{source}: field {name!r} must be a list"
            raise ProblemFileError(msg)
    for index, records in enumerate(document["certificates"]):
        if records is not None and not isinstance(records, list):
            msg = f"{source}: certificate #{index} must be a list of records or null"
            raise ProblemFileError(msg)
    if len(document["claims"]) != len(document["certificates"]):
        msg = f"{source}: {len(document['claims'])} claims but {len(document['certificates'])} certificates"
        raise ProblemFileError(msg)
    return document


@dataclass(frozen=True)
class ClaimCheck:
    """Verification outcome of one claim."""

    index: int
    claim: str
    ok: bool
    reason: str = ""


def verify_document(problem: Problem, document: Mapping[str, Any]) -> list[ClaimCheck]:
    """Re-expand every certificate against the problem's assumptions and compare with its claims.

    Only polynomial arithmetic is used; no completion takes place.

    Raises:
        ProblemFileError: If a certificate record is malformed.
        UsageError: If a certificate refers to a generator index out of range.
    """
    document = validate_document(dict(document))
    if len(document["claims"]) != len(problem.claims):
        msg = f"The document has {len(document['claims'])} claims, the problem {len(problem.claims)}"
        raise ProblemFileError(msg)
    checks: list[ClaimCheck] = []
    for index, (claim, records) in enumerate(zip(problem.claims, document["certificates"], strict=True)):
        text = claim.format()
        if records is None:
            checks.append(ClaimCheck(index, text, ok=False, reason="no certificate"))
            continue
        cert = Certificate.from_records(records, problem.algebra)
        expanded = expand_cofactors(cert, problem.assumptions, problem.algebra)
        if expanded == claim:
            checks.append(ClaimCheck(index, text, ok=True))
        else:
            logger.debug("Certificate %d expands to %s instead of %s", index, expanded, claim)
            checks.append(ClaimCheck(index, text, ok=False, reason=f"expands to {expanded.format()}"))
    return checks
