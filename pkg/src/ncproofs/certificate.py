"""Cofactor certificates: two-sided combinations of assumptions expressing an ideal member."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Any, NamedTuple

from src.ncproofs.errors import ProblemFileError, UsageError
from src.ncproofs.freealg import Polynomial

if TYPE_CHECKING:
    from src.ncproofs.freealg import FreeAlgebra, Word

CofactorKey = tuple[str, int, str]


class Triple(NamedTuple):
    """One summand ``left_coeff*left_word * g[gen_index] * right_coeff*right_word``."""

    left_coeff: Fraction
    left_word: Word
    gen_index: int
    right_coeff: Fraction
    right_word: Word

    @property
    def coefficient(self) -> Fraction:
        """Product of both coefficients."""
        return self.left_coeff * self.right_coeff


@dataclass(frozen=True)
class Certificate:
    """A list of triples; expands to a polynomial once the assumptions are supplied."""

    triples: tuple[Triple, ...] = ()

    @classmethod
    def from_mapping(cls, cofactors: Mapping[CofactorKey, Fraction]) -> Certificate:
        """Build from ``{(left_word, gen_index, right_word): coefficient}`` keeping insertion order."""
        return cls(
            tuple(
                Triple(Fraction(coeff), left, index, Fraction(1), right)
                for (left, index, right), coeff in cofactors.items()
                if coeff
            )
        )

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples)

    def __len__(self) -> int:
        return len(self.triples)

    def is_integral(self) -> bool:
        """Whether every coefficient is an integer."""
        return all(t.left_coeff.denominator == 1 and t.right_coeff.denominator == 1 for t in self.triples)

    def as_tuples(self, algebra: FreeAlgebra) -> list[tuple[str, int, str]]:
        """Human-readable ``(left, index, right)`` tuples such as ``("d", 1, "1")``."""
        result = []
        for triple in self.triples:
            left = algebra.format_word(triple.left_word)
            right = algebra.format_word(triple.right_word)
            if triple.left_coeff != 1:
                left = algebra.monomial(triple.left_word, triple.left_coeff).format()
            if triple.right_coeff != 1:
                right = algebra.monomial(triple.right_word, triple.right_coeff).format()
            result.append((left, triple.gen_index, right))
        return result

    def to_records(self, algebra: FreeAlgebra) -> list[dict[str, Any]]:
        """Serialize to plain records with rational strings and variable-name lists."""
        return [
            {
                "left_coeff": str(t.left_coeff),
                "left_word": algebra.word_names(t.left_word),
                "gen_index": t.gen_index,
                "right_coeff": str(t.right_coeff),
                "right_word": algebra.word_names(t.right_word),
            }
            for t in self.triples
        ]

    @classmethod
    def from_records(cls, records: Iterable[Mapping[str, Any]], algebra: FreeAlgebra) -> Certificate:
        """Inverse of :meth:`to_records`.

        Raises:
            ProblemFileError: If a record is malformed.
        """
        triples = []
        for position, record in enumerate(records):
            try:
                triples.append(
                    Triple(
                        Fraction(str(record["left_coeff"])),
                        algebra.word(*record["left_word"]),
                        int(record["gen_index"]),
                        Fraction(str(record["right_coeff"])),
                        algebra.word(*record["right_word"]),
                    )
                )
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                msg = f"Malformed certificate record #{position}: {exc}"
                raise ProblemFileError(msg) from exc
        return cls(tuple(triples))


def expand_cofactors(
    cert: Certificate, assumptions: Sequence[Polynomial], algebra: FreeAlgebra | None = None
) -> Polynomial:
    """Expand ``sum(left * assumptions[i] * right)`` with plain arithmetic.

    Args:
        cert: The certificate.
        assumptions: The generators the triples index into.
        algebra: Algebra of the result; needed only when ``assumptions`` is empty.

    Returns:
        The expanded, normalized polynomial.

    Raises:
        UsageError: If a generator index is out of range, or if both ``assumptions`` and ``algebra`` are
            missing; an empty certificate expands to zero only in a known algebra.
    """
    if algebra is None:
        if not assumptions:
            msg = "An algebra is needed to expand against an empty assumption list"
            raise UsageError(msg)
        algebra = assumptions[0].algebra
    total: dict[str, Fraction] = {}
    for triple in cert.triples:
        if not 0 <= triple.gen_index < len(assumptions):
            msg = f"Generator index {triple.gen_index} out of range for {len(assumptions)} assumptions"
            raise UsageError(msg)
        factor = triple.coefficient
        for word, coeff in assumptions[triple.gen_index].items():
            key = triple.left_word + word + triple.right_word
            value = total.get(key, 0) + factor * coeff
            if value:
                total[key] = value
            else:
                total.pop(key, None)
    return Polynomial(algebra, total)
