"""Configuration classes for the ncproofs CLI and HTTP service."""

from __future__ import annotations

import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

__version__ = "1.0.0"

basedir = Path(__file__).parent.resolve()


def _project_root() -> Path:
    for parent in [basedir, *basedir.parents]:
        if (parent / "pyproject.toml").exists():
            return parent
    return basedir


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    if value is None or not value.strip():
        return default
    try:
        return int(value)
    except ValueError:
        msg = f"Environment variable {name} must be an integer, got {value!r}"
        raise ValueError(msg) from None


class Config:
    """Base configuration class with common settings."""

    DEBUG = False
    TESTING = False
    # Completion and search budgets
    MAXITER = _env_int("NCPROOFS_MAXITER", 10)
    DEGBOUND = _env_int("NCPROOFS_DEGBOUND", 5)
    PROGRESS_INTERVAL = _env_int("NCPROOFS_PROGRESS_INTERVAL", 5)
    # Herbrand expansion defaults for `prove`
    HERBRAND_DEGREE = _env_int("NCPROOFS_HERBRAND_DEGREE", 3)
    HERBRAND_SUMMANDS = 1
    HERBRAND_COEFFICIENT = 1
    MAX_CLAUSES = _env_int("NCPROOFS_MAX_CLAUSES", 64)
    LOG_LEVEL = os.environ.get("NCPROOFS_LOG_LEVEL", "INFO")
    FIXTURES_DIR = Path(os.environ.get("NCPROOFS_FIXTURES_DIR") or _project_root() / "fixtures")
    # Request bodies carry problem files only
    MAX_CONTENT_LENGTH = 1024 * 1024


class ProductionConfig(Config):
    """Production environment configuration."""

    LOG_LEVEL = os.environ.get("NCPROOFS_LOG_LEVEL", "WARNING")


class DevelopmentConfig(Config):
    """Development environment configuration."""

    DEVELOPMENT = True
    DEBUG = True


class TestingConfig(Config):
    """Testing environment configuration."""

    TESTING = True
    LOG_LEVEL = "WARNING"


config_by_name: dict[str, type[Config]] = {
    "development": DevelopmentConfig,
    "testing": TestingConfig,
    "production": ProductionConfig,
}


def get_config(name: str | None = None) -> type[Config]:
    """Look up a configuration class by short name.

    Args:
        name: One of ``development``, ``testing`` or ``production``. Defaults to the
            ``NCPROOFS_ENV`` environment variable, then ``development``.

    Returns:
        The configuration class.

    Raises:
        KeyError: If the name is unknown.
    """
    key = (name or os.environ.get("NCPROOFS_ENV") or "development").lower()
    try:
        return config_by_name[key]
    except KeyError:
        msg = f"Unknown configuration {key!r}; expected one of {sorted(config_by_name)}"
        raise KeyError(msg) from None
