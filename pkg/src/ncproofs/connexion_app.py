"""Connexion-based Flask application serving the proof commands over HTTP."""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import TYPE_CHECKING, Any, cast

import connexion
from werkzeug.middleware.proxy_fix import ProxyFix

from src.ncproofs.config import get_config

if TYPE_CHECKING:
    from connexion import FlaskApp

logger = logging.getLogger(__name__)


def _find_project_root() -> Path:
    """Find project root by looking for pyproject.toml.

    Returns:
        Path to the project root directory.

    Raises:
        RuntimeError: If pyproject.toml cannot be found.
    """
    current = Path(__file__).resolve()
    for parent in [current, *current.parents]:
        if (parent / "pyproject.toml").exists():
            return parent
    msg = "Could not find project root (no pyproject.toml found)"
    raise RuntimeError(msg)


def create_app(config_name: str | None = None) -> FlaskApp:
    """Create and configure the Connexion Flask application.

    Args:
        config_name: ``development``, ``testing`` or ``production``. If None, uses the
            ``NCPROOFS_ENV`` environment variable or defaults to development.

    Returns:
        Configured Connexion FlaskApp instance.

    Raises:
        RuntimeError: If the OpenAPI specification cannot be loaded.
    """
    root_dir = _find_project_root()
    connexion_app = connexion.FlaskApp(__name__, specification_dir=str(root_dir))

    flask_app = connexion_app.app
    config = get_config(config_name)
    flask_app.config.from_object(config)
    flask_app.config["NCPROOFS_CONFIG"] = config

    # Trust one hop of X-Forwarded-* headers
    flask_app.wsgi_app = cast("Any", ProxyFix(flask_app.wsgi_app, x_for=1, x_proto=1, x_host=1, x_prefix=1))

    logger.info("Loading OpenAPI specification from openapi.yaml...")
    try:
        connexion_app.add_api(
            "openapi.yaml",
            arguments={"title": "ncproofs API"},
            pythonic_params=True,
            validate_responses=False,
        )
    except (FileNotFoundError, ValueError, KeyError) as e:
        logger.exception("Error loading OpenAPI spec")
        msg = f"Failed to load OpenAPI specification: {e}"
        raise RuntimeError(msg) from e
    logger.info("OpenAPI spec loaded successfully!")
    return connexion_app


def main() -> None:
    """Run the Connexion application under uvicorn."""
    port = int(os.environ.get("PORT", "5000"))
    create_app().run(host="0.0.0.0", port=port)  # noqa: S104  # nosec B104


if __name__ == "__main__":
    main()
