"""Labelled quivers: domain and codomain typing of operator variables."""

from __future__ import annotations

import logging
from collections.abc import Hashable, Iterable
from typing import TYPE_CHECKING

import networkx as nx

from src.ncproofs.errors import QuiverError, UsageError

if TYPE_CHECKING:
    from src.ncproofs.freealg import FreeAlgebra, Polynomial, Word

logger = logging.getLogger(__name__)

Signature = tuple[Hashable, Hashable]


class Quiver:
    """A directed multigraph whose edges are labelled by variable names.

    An edge ``(U, V, a)`` says that ``a`` maps objects of sort ``U`` to sort ``V``.
    Words act right to left: ``a*d`` means "apply ``d``, then ``a``".
    """

    def __init__(self, edges: Iterable[tuple[Hashable, Hashable, str]] = ()) -> None:
        """Build the quiver from ``(source, target, label)`` triples."""
        self.graph: nx.MultiDiGraph = nx.MultiDiGraph()
        self._by_label: dict[str, set[Signature]] = {}
        for edge in edges:
            self.add_edge(*edge)

    def add_edge(self, source: Hashable, target: Hashable, label: str) -> None:
        """Add one labelled edge; the same label may occur on several edges."""
        if not isinstance(label, str) or not label:
            msg = f"Quiver edge label must be a variable name, got {label!r}"
            raise UsageError(msg)
        self.graph.add_edge(source, target, key=label)
        self._by_label.setdefault(label, set()).add((source, target))

    @property
    def edges(self) -> list[tuple[Hashable, Hashable, str]]:
        """All ``(source, target, label)`` triples in insertion order."""
        return [(u, v, k) for u, v, k in self.graph.edges(keys=True)]

    @property
    def vertices(self) -> list[Hashable]:
        """Object symbols."""
        return list(self.graph.nodes)

    @property
    def labels(self) -> set[str]:
        """Variable names that label at least one edge."""
        return set(self._by_label)

    def __repr__(self) -> str:
        labels = ", ".join(sorted(self._by_label))
        return f"Labelled quiver with {self.graph.number_of_nodes()} vertices in the labels {{{labels}}}"

    def signatures_of_names(self, names: Iterable[str]) -> set[Signature]:
        """Signatures of the word spelled by ``names`` (left to right)."""
        factors = list(names)
        if not factors:
            return {(u, u) for u in self.graph.nodes}
        current = set(self._by_label.get(factors[-1], ()))
        for name in reversed(factors[:-1]):
            if not current:
                break
            steps = self._by_label.get(name, set())
            current = {(start, end) for start, middle in current for source, end in steps if source == middle}
        return current

    def signatures(self, algebra: FreeAlgebra, word: Word) -> set[Signature]:
        """All ``(source, target)`` pairs along which ``word`` traces a path."""
        return self.signatures_of_names(algebra.word_names(word))

    def polynomial_signatures(self, p: Polynomial) -> set[Signature] | None:
        """Common signatures of all monomials of ``p``; ``None`` for the zero polynomial."""
        common: set[Signature] | None = None
        for word, _ in p.items():
            sigs = self.signatures(p.algebra, word)
            common = sigs if common is None else common & sigs
            if not common:
                return set()
        return common

    def is_compatible(self, p: Polynomial) -> bool:
        """Whether all monomials of ``p`` share a common (domain, codomain)."""
        common = self.polynomial_signatures(p)
        return common is None or bool(common)

    def check(self, p: Polynomial, role: str = "polynomial") -> None:
        """Raise :class:`QuiverError` unless ``p`` is compatible.

        Raises:
            QuiverError: Naming the offending polynomial.
        """
        if not self.is_compatible(p):
            logger.debug("Incompatible %s %s under %r", role, p, self)
            msg = f"The {role} {p} is not compatible with the quiver"
            raise QuiverError(msg)


def signatures(q: Quiver, algebra: FreeAlgebra, word: Word) -> set[Signature]:
    """See :meth:`Quiver.signatures`."""
    return q.signatures(algebra, word)


def is_compatible(q: Quiver, p: Polynomial) -> bool:
    """See :meth:`Quiver.is_compatible`."""
    return q.is_compatible(p)
