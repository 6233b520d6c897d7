"""API handlers for Connexion OpenAPI endpoints.

Every POST endpoint takes a JSON body with the problem file as TOML text in
``problem`` plus optional budget overrides, and answers with the command's
exit code, its stdout text and its payload.
"""

from __future__ import annotations

import logging
from typing import Any

from flask import current_app

from src.ncproofs.commands import CommandResult, Settings, execute, run_verify
from src.ncproofs.config import Config, __version__
from src.ncproofs.errors import NCProofError
from src.ncproofs.logic import HerbrandBounds
from src.ncproofs.problem import Problem, parse_problem

logger = logging.getLogger(__name__)

_SOURCE = "<request>"


def _config() -> type[Config]:
    return current_app.config.get("NCPROOFS_CONFIG", Config)


def _error(message: object, status_code: int = 400) -> tuple[dict[str, Any], int]:
    return {"status": "error", "message": str(message)}, status_code


def _response(result: CommandResult) -> tuple[dict[str, Any], int]:
    return {"exit_code": result.exit_code, "text": result.text, "payload": result.payload}, 200


def _problem(body: dict[str, Any]) -> Problem:
    return parse_problem(str(body.get("problem", "")), _SOURCE)


def _settings(problem: Problem, body: dict[str, Any], *keys: str) -> Settings:
    overrides = {key: body.get(key) for key in ("maxiter", "quiver_check", *keys)}
    if isinstance(overrides.get("herbrand"), dict):
        overrides["herbrand"] = HerbrandBounds(**overrides["herbrand"])
    return Settings.resolve(problem, _config(), **overrides)


def health_check() -> tuple[dict[str, str], int]:
    """Health check endpoint for monitoring and deployment platforms.

    Returns:
        JSON response with status and HTTP 200 code.
    """
    return {"status": "healthy", "version": __version__}, 200


def certify(body: dict[str, Any]) -> tuple[dict[str, Any], int]:
    """Certify the claims of the posted problem."""
    try:
        problem = _problem(body)
        return _response(execute("certify", problem, _settings(problem, body)))
    except (NCProofError, TypeError) as exc:
        logger.warning("certify request rejected: %s", exc)
        return _error(exc)


def verify(body: dict[str, Any]) -> tuple[dict[str, Any], int]:
    """Re-check a certificate document against the posted problem."""
    document = body.get("document")
    if not isinstance(document, dict):
        return _error("'document' must be a certificate document object")
    try:
        return _response(run_verify(_problem(body), document))
    except (NCProofError, TypeError) as exc:
        logger.warning("verify request rejected: %s", exc)
        return _error(exc)


def groebner(body: dict[str, Any]) -> tuple[dict[str, Any], int]:
    """Compute a partial Gröbner basis of the posted assumptions."""
    try:
        problem = _problem(body)
        settings = _settings(problem, body, "interreduce")
        return _response(execute("gb", problem, settings, maxdeg=body.get("maxdeg")))
    except (NCProofError, TypeError) as exc:
        logger.warning("gb request rejected: %s", exc)
        return _error(exc)


def prove(body: dict[str, Any]) -> tuple[dict[str, Any], int]:
    """Semi-decide the posted statement within bounded Herbrand instances."""
    try:
        problem = _problem(body)
        settings = _settings(problem, body, "herbrand", "max_clauses")
        return _response(execute("prove", problem, settings, max_stages=body.get("max_stages")))
    except (NCProofError, TypeError) as exc:
        logger.warning("prove request rejected: %s", exc)
        return _error(exc)
