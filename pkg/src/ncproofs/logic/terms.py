"""Sorted operator terms.

A sort ``(u, v)`` types a morphism from object ``u`` to object ``v``. Products
compose right to left: if ``t: u -> v`` and ``s: v -> w`` then ``s*t: u -> w``.
Term classes check sorts on construction, so an ill-sorted tree cannot exist.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import NamedTuple

from src.ncproofs.errors import SortError
from src.ncproofs.freealg import FreeAlgebra, Polynomial


class Sort(NamedTuple):
    """Domain and codomain of a morphism."""

    source: str
    target: str

    def __str__(self) -> str:
        return f"{self.source} -> {self.target}"

    def then(self, outer: Sort) -> Sort:
        """Sort of ``outer_term * self_term``.

        Raises:
            SortError: If the codomain of this sort is not the domain of ``outer``.
        """
        if self.target != outer.source:
            msg = f"Cannot compose {outer} after {self}"
            raise SortError(msg)
        return Sort(self.source, outer.target)


class SortContext:
    """The sort function: declared variables and their sorts."""

    def __init__(self, sorts: Mapping[str, Sort] | None = None) -> None:
        """Start from an optional ``name -> sort`` mapping, kept in insertion order."""
        self._sorts: dict[str, Sort] = {}
        for name, sort in (sorts or {}).items():
            self.declare(name, sort)

    def declare(self, name: str, sort: Sort | tuple[str, str]) -> None:
        """Declare a variable.

        Raises:
            SortError: If ``name`` is already declared with another sort.
        """
        sort = Sort(*sort)
        existing = self._sorts.get(name)
        if existing is not None and existing != sort:
            msg = f"Variable {name!r} is declared as {existing} and as {sort}"
            raise SortError(msg)
        self._sorts[name] = sort

    def sort_of(self, name: str) -> Sort:
        """Sort of a declared variable.

        Raises:
            SortError: If the variable is not declared.
        """
        try:
            return self._sorts[name]
        except KeyError:
            msg = f"Variable {name!r} has no declared sort"
            raise SortError(msg) from None

    def __contains__(self, name: object) -> bool:
        return name in self._sorts

    def __iter__(self) -> Iterator[str]:
        return iter(self._sorts)

    def __len__(self) -> int:
        return len(self._sorts)

    def items(self) -> Iterable[tuple[str, Sort]]:
        """Declared ``(name, sort)`` pairs."""
        return self._sorts.items()

    def var(self, name: str) -> Var:
        """The variable term for ``name``."""
        return Var(name, self.sort_of(name))

    def zero(self, source: str, target: str) -> Zero:
        """The zero morphism of sort ``source -> target``."""
        return Zero(Sort(source, target))

    def objects(self) -> list[str]:
        """Object symbols in order of first appearance."""
        seen: dict[str, None] = {}
        for sort in self._sorts.values():
            seen.setdefault(sort.source)
            seen.setdefault(sort.target)
        return list(seen)


@dataclass(frozen=True)
class OpTerm:
    """Base class of sorted operator terms."""

    @property
    def sort(self) -> Sort:
        """The sort of this term."""
        raise NotImplementedError

    def variables(self) -> set[str]:
        """Variable names occurring in the term."""
        return set()

    def substitute(self, images: Mapping[str, OpTerm]) -> OpTerm:
        """Replace variables by terms of the same sort."""
        return self

    def to_polynomial(self, algebra: FreeAlgebra) -> Polynomial:
        """Translate to a noncommutative polynomial; zero constants become ``0``."""
        raise NotImplementedError


@dataclass(frozen=True)
class Var(OpTerm):
    """A variable."""

    name: str
    var_sort: Sort

    @property
    def sort(self) -> Sort:
        return self.var_sort

    def variables(self) -> set[str]:
        return {self.name}

    def substitute(self, images: Mapping[str, OpTerm]) -> OpTerm:
        image = images.get(self.name)
        if image is None:
            return self
        if image.sort != self.var_sort:
            msg = f"Cannot substitute {image} of sort {image.sort} for {self.name} of sort {self.var_sort}"
            raise SortError(msg)
        return image

    def to_polynomial(self, algebra: FreeAlgebra) -> Polynomial:
        return algebra.gen(self.name)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Zero(OpTerm):
    """The zero morphism of a sort."""

    zero_sort: Sort

    @property
    def sort(self) -> Sort:
        return self.zero_sort

    def to_polynomial(self, algebra: FreeAlgebra) -> Polynomial:
        return algebra.zero()

    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True)
class Sum(OpTerm):
    """``left + right``; both summands share one sort."""

    left: OpTerm
    right: OpTerm

    def __post_init__(self) -> None:
        if self.left.sort != self.right.sort:
            msg = f"Cannot add {self.left} of sort {self.left.sort} and {self.right} of sort {self.right.sort}"
            raise SortError(msg)

    @property
    def sort(self) -> Sort:
        return self.left.sort

    def variables(self) -> set[str]:
        return self.left.variables() | self.right.variables()

    def substitute(self, images: Mapping[str, OpTerm]) -> OpTerm:
        return Sum(self.left.substitute(images), self.right.substitute(images))

    def to_polynomial(self, algebra: FreeAlgebra) -> Polynomial:
        return self.left.to_polynomial(algebra) + self.right.to_polynomial(algebra)

    def __str__(self) -> str:
        return f"{self.left} + {self.right}"


@dataclass(frozen=True)
class Product(OpTerm):
    """``left * right``: apply ``right`` first."""

    left: OpTerm
    right: OpTerm
    product_sort: Sort = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "product_sort", self.right.sort.then(self.left.sort))

    @property
    def sort(self) -> Sort:
        return self.product_sort

    def variables(self) -> set[str]:
        return self.left.variables() | self.right.variables()

    def substitute(self, images: Mapping[str, OpTerm]) -> OpTerm:
        return Product(self.left.substitute(images), self.right.substitute(images))

    def to_polynomial(self, algebra: FreeAlgebra) -> Polynomial:
        return self.left.to_polynomial(algebra) * self.right.to_polynomial(algebra)

    def __str__(self) -> str:
        return f"{_factor(self.left)}*{_factor(self.right)}"


@dataclass(frozen=True)
class Scaled(OpTerm):
    """An integer multiple ``coeff * term``."""

    coeff: int
    term: OpTerm

    @property
    def sort(self) -> Sort:
        return self.term.sort

    def variables(self) -> set[str]:
        return self.term.variables()

    def substitute(self, images: Mapping[str, OpTerm]) -> OpTerm:
        return Scaled(self.coeff, self.term.substitute(images))

    def to_polynomial(self, algebra: FreeAlgebra) -> Polynomial:
        return self.term.to_polynomial(algebra).scale(self.coeff)

    def __str__(self) -> str:
        if self.coeff == -1:
            return f"-{_factor(self.term)}"
        return f"{self.coeff}*{_factor(self.term)}"


def _factor(term: OpTerm) -> str:
    return f"({term})" if isinstance(term, Sum) else str(term)


def word_term(context: SortContext, names: Iterable[str]) -> OpTerm:
    """The product term of a non-empty word given by variable names, left to right.

    Raises:
        SortError: If the word is empty or not composable.
    """
    factors = [context.var(name) for name in names]
    if not factors:
        msg = "A word term needs at least one factor"
        raise SortError(msg)
    term: OpTerm = factors[-1]
    for factor in reversed(factors[:-1]):
        term = Product(factor, term)
    return term


def linear_combination(summands: Iterable[tuple[int, OpTerm]], sort: Sort) -> OpTerm:
    """``sum(c * t)`` as a term; the empty combination is the zero of ``sort``."""
    term: OpTerm | None = None
    for coeff, summand in summands:
        piece = summand if coeff == 1 else Scaled(coeff, summand)
        term = piece if term is None else Sum(term, piece)
    return Zero(sort) if term is None else term
