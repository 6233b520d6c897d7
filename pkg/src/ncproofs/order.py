"""Admissible monomial orders on words: degree-lexicographic and block (elimination) orders."""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from typing import TYPE_CHECKING

from src.ncproofs.errors import UsageError

if TYPE_CHECKING:
    from fractions import Fraction

    from src.ncproofs.freealg import FreeAlgebra, Polynomial, Word

SortKey = tuple[tuple[int, ...], str]


class Comparison(enum.IntEnum):
    """Result of comparing two words."""

    LT = -1
    EQ = 0
    GT = 1


class MonomialOrder:
    """A block order; a single block is the degree left-lexicographic order.

    Blocks are given in ascending order: every word with more letters from a
    later block is larger, whatever its other letters. Inside a tie of the
    block-degree vector, words are compared left to right by rank, ranks being
    block-major (block index first, position inside the block second).
    """

    __slots__ = ("_cache", "_depth", "_letters", "_rank_table", "_width", "algebra", "blocks")

    def __init__(self, algebra: FreeAlgebra, blocks: Sequence[Sequence[str]] | None = None) -> None:
        """Build an order over ``algebra``.

        Args:
            algebra: The free algebra whose words are compared.
            blocks: Ascending variable blocks; defaults to one block in declaration order.

        Raises:
            UsageError: If the blocks do not partition the algebra's variables.
        """
        self.algebra = algebra
        if blocks is None:
            blocks = [list(algebra.names)]
        self.blocks: tuple[tuple[str, ...], ...] = tuple(tuple(block) for block in blocks)
        seen: list[str] = [name for block in self.blocks for name in block]
        if any(not block for block in self.blocks):
            msg = "Order blocks must be non-empty"
            raise UsageError(msg)
        if len(seen) != len(set(seen)) or set(seen) != set(algebra.names):
            msg = f"Order blocks {[list(b) for b in self.blocks]} must partition the variables {list(algebra.names)}"
            raise UsageError(msg)
        self._rank_table: dict[int, str] = {}
        self._depth: dict[str, int] = {}
        rank = 0
        for depth, block in enumerate(self.blocks):
            for name in block:
                letter = algebra.letter(name)
                self._rank_table[ord(letter)] = chr(0x100 + rank)
                self._depth[letter] = depth
                rank += 1
        self._letters = frozenset(self._depth)
        self._width = len(self.blocks)
        self._cache: dict[str, SortKey] = {}

    @classmethod
    def deglex(cls, algebra: FreeAlgebra, ranking: Iterable[str] | None = None) -> MonomialOrder:
        """Degree left-lexicographic order with ascending variable ranking."""
        return cls(algebra, [list(ranking) if ranking is not None else list(algebra.names)])

    @classmethod
    def from_spec(cls, algebra: FreeAlgebra, spec: Sequence[str] | Sequence[Sequence[str]] | None) -> MonomialOrder:
        """Build from ``[x, y, z]`` (single block) or ``[[y, x], [z]]`` (blocks)."""
        if spec is None or len(spec) == 0:
            return cls(algebra)
        if all(isinstance(item, str) for item in spec):
            return cls(algebra, [list(spec)])  # type: ignore[arg-type]
        if all(not isinstance(item, str) for item in spec):
            return cls(algebra, [list(block) for block in spec])
        msg = "An order is either a list of names or a list of blocks, not a mixture"
        raise UsageError(msg)

    @property
    def is_block_order(self) -> bool:
        """Whether more than one block is present."""
        return self._width > 1

    def key(self, word: Word) -> SortKey:
        """Sort key: larger key means larger word."""
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        if not self._letters.issuperset(word):
            foreign = next(letter for letter in word if letter not in self._letters)
            msg = f"Letter {foreign!r} is not ordered by {self!r}"
            raise UsageError(msg)
        if self._width == 1:
            degrees: tuple[int, ...] = (len(word),)
        else:
            counts = [0] * self._width
            for letter in word:
                counts[self._depth[letter]] += 1
            degrees = tuple(reversed(counts))
        result = (degrees, word.translate(self._rank_table))
        self._cache[word] = result
        return result

    def compare(self, w1: Word, w2: Word) -> Comparison:
        """Three-way comparison of two words."""
        k1, k2 = self.key(w1), self.key(w2)
        if k1 == k2:
            return Comparison.EQ
        return Comparison.LT if k1 < k2 else Comparison.GT

    def sort(self, words: Iterable[Word], *, reverse: bool = False) -> list[Word]:
        """Words in ascending order (descending with ``reverse``)."""
        return sorted(words, key=self.key, reverse=reverse)

    def leading_term(self, p: Polynomial) -> tuple[Fraction, Word]:
        """See :func:`leading_term`."""
        return leading_term(self, p)

    def __repr__(self) -> str:
        if self._width == 1:
            return f"deglex({' < '.join(self.blocks[0])})"
        return f"blocks({[list(block) for block in self.blocks]})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonomialOrder):
            return NotImplemented
        return self.algebra == other.algebra and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash((self.algebra, self.blocks))


def compare(o: MonomialOrder, w1: Word, w2: Word) -> Comparison:
    """Compare two words under ``o``."""
    return o.compare(w1, w2)


def leading_term(o: MonomialOrder, p: Polynomial) -> tuple[Fraction, Word]:
    """The (coefficient, word) pair of ``p`` whose word is maximal under ``o``.

    Raises:
        UsageError: If ``p`` is zero.
    """
    if p.is_zero():
        msg = "The zero polynomial has no leading term"
        raise UsageError(msg)
    word = max((w for w, _ in p.items()), key=o.key)
    return p.coefficient(word), word
