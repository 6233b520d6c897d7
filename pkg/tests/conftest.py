"""Shared test fixtures for the ncproofs tests."""

import os

# Select the testing configuration BEFORE importing application modules
os.environ["NCPROOFS_ENV"] = "testing"

import random
from pathlib import Path
from typing import Any

import pytest

from src.ncproofs.freealg import AdjointMap, FreeAlgebra, Polynomial, add_adj, pinv
from src.ncproofs.gb import NCIdeal

PROJECT_ROOT = Path(__file__).resolve().parent.parent
FIXTURES_DIR = PROJECT_ROOT / "fixtures"

A5_GENERATORS = ["a*b*a - a", "b*a*b - b", "a*b - c*d", "b*a - d*c", "c*d*c - c", "d*c*d - d"]


@pytest.fixture()
def abcd() -> FreeAlgebra:
    """The free algebra on a, b, c, d."""
    return FreeAlgebra(["a", "b", "c", "d"])


@pytest.fixture()
def xy() -> FreeAlgebra:
    """The free algebra on x, y."""
    return FreeAlgebra(["x", "y"])


@pytest.fixture()
def xy_ideal(xy: FreeAlgebra) -> NCIdeal:
    """The ideal generated by x*y*x - x*y and y*x^2*y - y under deglex x < y."""
    return NCIdeal([xy.parse("x*y*x - x*y"), xy.parse("y*x^2*y - y")])


@pytest.fixture()
def a5_ideal(abcd: FreeAlgebra) -> NCIdeal:
    """Two pairs of mutually inverse-like elements with a*b = c*d and b*a = d*c."""
    return NCIdeal([abcd.parse(text) for text in A5_GENERATORS])


@pytest.fixture()
def mp_algebra() -> FreeAlgebra:
    """Variables for the uniqueness of the Moore-Penrose inverse."""
    return FreeAlgebra(["a", "b", "c", "a_adj", "b_adj", "c_adj"])


@pytest.fixture()
def mp_uniqueness(mp_algebra: FreeAlgebra) -> list[Polynomial]:
    """Penrose identities of b and c as inverses of a, closed under the adjoint."""
    star = AdjointMap.from_suffix(mp_algebra)
    return add_adj(
        pinv("a", "b", "a_adj", "b_adj", mp_algebra) + pinv("a", "c", "a_adj", "c_adj", mp_algebra),
        star,
    )


@pytest.fixture()
def rng() -> random.Random:
    """A seeded random generator so property tests are reproducible."""
    return random.Random(20240517)  # noqa: S311


@pytest.fixture()
def fixtures_dir() -> Path:
    """The bundled case-study corpus."""
    return FIXTURES_DIR


@pytest.fixture()
def connexion_client() -> Any:
    """Create a test client for the Connexion app.

    Returns:
        Starlette TestClient for making requests to the Connexion ASGI app.
    """
    from src.ncproofs.connexion_app import create_app  # noqa: PLC0415

    return create_app("testing").test_client()


def write_problem(directory: Path, text: str, name: str = "problem.toml") -> Path:
    """Write a problem file into ``directory`` and return its path."""
    path = directory / name
    path.write_text(text, encoding="utf-8")
    return path


def random_word(rng: random.Random, algebra: FreeAlgebra, max_length: int, min_length: int = 0) -> str:
    """A uniformly random word with length in ``[min_length, max_length]``."""
    length = rng.randint(min_length, max_length)
    return "".join(algebra.letter(rng.choice(algebra.names)) for _ in range(length))


def random_polynomial(rng: random.Random, algebra: FreeAlgebra, terms: int = 3, degree: int = 3) -> Polynomial:
    """A random polynomial with small integer coefficients."""
    return Polynomial(
        algebra,
        {random_word(rng, algebra, degree): rng.choice([-2, -1, 1, 2]) for _ in range(rng.randint(1, terms))},
    )


def random_binomial(rng: random.Random, algebra: FreeAlgebra, degree: int = 4) -> Polynomial:
    """``m1 - m2`` for two distinct random words, the first non-empty."""
    while True:
        first = random_word(rng, algebra, degree, 1)
        second = random_word(rng, algebra, degree)
        if first != second:
            return Polynomial(algebra, {first: 1, second: -1})
