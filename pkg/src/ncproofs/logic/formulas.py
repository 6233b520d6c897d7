"""Operator statements and their conjunctive normal form."""

from __future__ import annotations

import enum
import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property

from src.ncproofs.errors import SortError, UsageError
from src.ncproofs.logic.terms import OpTerm


class Formula:
    """Base class of operator statements."""

    def free_variables(self) -> set[str]:
        """Variables not bound by a quantifier."""
        raise NotImplementedError

    def is_quantifier_free(self) -> bool:
        """Whether no quantifier occurs."""
        return True


@dataclass(frozen=True)
class Equation(Formula):
    """``lhs = rhs`` between terms of one sort."""

    lhs: OpTerm
    rhs: OpTerm

    def __post_init__(self) -> None:
        if self.lhs.sort != self.rhs.sort:
            msg = f"Equation {self.lhs} = {self.rhs} relates sorts {self.lhs.sort} and {self.rhs.sort}"
            raise SortError(msg)

    def free_variables(self) -> set[str]:
        return self.lhs.variables() | self.rhs.variables()

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class Not(Formula):
    """Negation; ``s != t`` is ``Not(Equation(s, t))``."""

    body: Formula

    def free_variables(self) -> set[str]:
        return self.body.free_variables()

    def is_quantifier_free(self) -> bool:
        return self.body.is_quantifier_free()

    def __str__(self) -> str:
        if isinstance(self.body, Equation):
            return f"{self.body.lhs} != {self.body.rhs}"
        return f"~({self.body})"


@dataclass(frozen=True)
class And(Formula):
    """Conjunction of two or more formulas."""

    parts: tuple[Formula, ...]

    def free_variables(self) -> set[str]:
        return set().union(*(part.free_variables() for part in self.parts))

    def is_quantifier_free(self) -> bool:
        return all(part.is_quantifier_free() for part in self.parts)

    def __str__(self) -> str:
        return " & ".join(f"({part})" for part in self.parts)


@dataclass(frozen=True)
class Or(Formula):
    """Disjunction of two or more formulas."""

    parts: tuple[Formula, ...]

    def free_variables(self) -> set[str]:
        return set().union(*(part.free_variables() for part in self.parts))

    def is_quantifier_free(self) -> bool:
        return all(part.is_quantifier_free() for part in self.parts)

    def __str__(self) -> str:
        return " | ".join(f"({part})" for part in self.parts)


@dataclass(frozen=True)
class Implies(Formula):
    """``premise -> conclusion``."""

    premise: Formula
    conclusion: Formula

    def free_variables(self) -> set[str]:
        return self.premise.free_variables() | self.conclusion.free_variables()

    def is_quantifier_free(self) -> bool:
        return self.premise.is_quantifier_free() and self.conclusion.is_quantifier_free()

    def __str__(self) -> str:
        return f"({self.premise}) -> ({self.conclusion})"


@dataclass(frozen=True)
class ForAll(Formula):
    """Universal quantification over the named variables."""

    names: tuple[str, ...]
    body: Formula

    def free_variables(self) -> set[str]:
        return self.body.free_variables() - set(self.names)

    def is_quantifier_free(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"forall {', '.join(self.names)}: {self.body}"


@dataclass(frozen=True)
class Exists(Formula):
    """Existential quantification over the named variables."""

    names: tuple[str, ...]
    body: Formula

    def free_variables(self) -> set[str]:
        return self.body.free_variables() - set(self.names)

    def is_quantifier_free(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"exists {', '.join(self.names)}: {self.body}"


def conjunction(*parts: Formula) -> Formula:
    """``And`` of the parts, flattening nested conjunctions; a single part is returned as is."""
    flat: list[Formula] = []
    for part in parts:
        flat.extend(part.parts if isinstance(part, And) else (part,))
    if not flat:
        msg = "An empty conjunction has no formula"
        raise UsageError(msg)
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disjunction(*parts: Formula) -> Formula:
    """``Or`` of the parts, flattening nested disjunctions; a single part is returned as is."""
    flat: list[Formula] = []
    for part in parts:
        flat.extend(part.parts if isinstance(part, Or) else (part,))
    if not flat:
        msg = "An empty disjunction has no formula"
        raise UsageError(msg)
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def is_closed(phi: Formula) -> bool:
    """Whether every variable is bound."""
    return not phi.free_variables()


class Shape(enum.StrEnum):
    """Quantifier shape of a statement."""

    UNIVERSAL = "universal"
    EXISTENTIAL = "existential"
    FORALL_EXISTS = "forall-exists"
    OTHER = "other"


def strip_quantifiers(phi: Formula) -> tuple[list[tuple[str, tuple[str, ...]]], Formula]:
    """Split a prenex formula into its quantifier blocks and its matrix."""
    prefix: list[tuple[str, tuple[str, ...]]] = []
    while isinstance(phi, ForAll | Exists):
        kind = "forall" if isinstance(phi, ForAll) else "exists"
        if prefix and prefix[-1][0] == kind:
            prefix[-1] = (kind, prefix[-1][1] + phi.names)
        else:
            prefix.append((kind, phi.names))
        phi = phi.body
    return prefix, phi


def shape(phi: Formula) -> Shape:
    """Classify a statement by its quantifier prefix."""
    prefix, matrix = strip_quantifiers(phi)
    if not matrix.is_quantifier_free():
        return Shape.OTHER
    kinds = [kind for kind, _ in prefix]
    if kinds in ([], ["forall"]):
        return Shape.UNIVERSAL
    if kinds == ["exists"]:
        return Shape.EXISTENTIAL
    if kinds == ["forall", "exists"]:
        return Shape.FORALL_EXISTS
    return Shape.OTHER


@dataclass(frozen=True, order=True)
class Literal:
    """An equation or its negation."""

    text: str
    positive: bool
    equation: Equation = field(compare=False)

    @classmethod
    def of(cls, equation: Equation, *, positive: bool) -> Literal:
        """Build a literal; the text is the ordering key."""
        return cls(str(equation), positive, equation)

    def __str__(self) -> str:
        return self.text if self.positive else f"{self.equation.lhs} != {self.equation.rhs}"


@dataclass(frozen=True)
class Clause:
    """A disjunction of disequalities ``a_j != b_j`` and equalities ``s_k = t_k``."""

    disequalities: tuple[Equation, ...]
    equalities: tuple[Equation, ...]

    def __post_init__(self) -> None:
        if not self.disequalities and not self.equalities:
            msg = "A clause needs at least one literal"
            raise UsageError(msg)

    @classmethod
    def from_literals(cls, literals: frozenset[Literal]) -> Clause:
        """Sort the literals into the two lists, in text order."""
        ordered = sorted(literals)
        return cls(
            tuple(lit.equation for lit in ordered if not lit.positive),
            tuple(lit.equation for lit in ordered if lit.positive),
        )

    @cached_property
    def literals(self) -> frozenset[Literal]:
        """The literal set."""
        return frozenset(
            [Literal.of(eq, positive=False) for eq in self.disequalities]
            + [Literal.of(eq, positive=True) for eq in self.equalities]
        )

    def as_formula(self) -> Formula:
        """The clause as a disjunction."""
        parts: list[Formula] = [Not(eq) for eq in self.disequalities]
        parts.extend(self.equalities)
        return disjunction(*parts)

    def __str__(self) -> str:
        return " | ".join(str(lit) for lit in sorted(self.literals))


def eliminate_implications(phi: Formula) -> Formula:
    """Rewrite ``p -> q`` as ``~p | q`` everywhere."""
    if isinstance(phi, Implies):
        return disjunction(Not(eliminate_implications(phi.premise)), eliminate_implications(phi.conclusion))
    if isinstance(phi, Not):
        return Not(eliminate_implications(phi.body))
    if isinstance(phi, And):
        return conjunction(*(eliminate_implications(p) for p in phi.parts))
    if isinstance(phi, Or):
        return disjunction(*(eliminate_implications(p) for p in phi.parts))
    if isinstance(phi, ForAll | Exists):
        return type(phi)(phi.names, eliminate_implications(phi.body))
    return phi


def push_negations(phi: Formula) -> Formula:
    """Move negations inwards until they sit on equations (implications already eliminated)."""
    if isinstance(phi, Not):
        body = phi.body
        if isinstance(body, Not):
            return push_negations(body.body)
        if isinstance(body, And):
            return disjunction(*(push_negations(Not(p)) for p in body.parts))
        if isinstance(body, Or):
            return conjunction(*(push_negations(Not(p)) for p in body.parts))
        if isinstance(body, ForAll):
            return Exists(body.names, push_negations(Not(body.body)))
        if isinstance(body, Exists):
            return ForAll(body.names, push_negations(Not(body.body)))
        if isinstance(body, Implies):
            return push_negations(Not(eliminate_implications(body)))
        return phi
    if isinstance(phi, And):
        return conjunction(*(push_negations(p) for p in phi.parts))
    if isinstance(phi, Or):
        return disjunction(*(push_negations(p) for p in phi.parts))
    if isinstance(phi, ForAll | Exists):
        return type(phi)(phi.names, push_negations(phi.body))
    if isinstance(phi, Implies):
        return push_negations(eliminate_implications(phi))
    return phi


def _clause_sets(phi: Formula) -> list[frozenset[Literal]]:
    if isinstance(phi, Equation):
        return [frozenset([Literal.of(phi, positive=True)])]
    if isinstance(phi, Not) and isinstance(phi.body, Equation):
        return [frozenset([Literal.of(phi.body, positive=False)])]
    if isinstance(phi, And):
        return [clause for part in phi.parts for clause in _clause_sets(part)]
    if isinstance(phi, Or):
        combined: list[frozenset[Literal]] = []
        for choice in itertools.product(*(_clause_sets(part) for part in phi.parts)):
            combined.append(frozenset().union(*choice))
        return combined
    msg = f"Not in negation normal form: {phi}"
    raise UsageError(msg)


def cnf(phi: Formula) -> tuple[Clause, ...]:
    """Conjunctive normal form of a quantifier-free statement, modulo associativity and commutativity.

    Implications are eliminated, negations pushed onto equations and
    disjunctions distributed over conjunctions. Literals inside a clause and the
    clauses themselves are sorted and deduplicated.

    Raises:
        UsageError: If ``phi`` contains a quantifier.
    """
    if not phi.is_quantifier_free():
        msg = "CNF is computed for quantifier-free statements only"
        raise UsageError(msg)
    nnf = push_negations(eliminate_implications(phi))
    unique = sorted(set(_clause_sets(nnf)), key=lambda literals: sorted(literals))
    return tuple(Clause.from_literals(literals) for literals in unique)


def evaluate(phi: Formula, assignment: Mapping[Equation, bool]) -> bool:
    """Truth value of a quantifier-free statement under a truth assignment of its equations.

    Raises:
        UsageError: If ``phi`` has quantifiers or an equation has no truth value.
    """
    if isinstance(phi, Equation):
        try:
            return assignment[phi]
        except KeyError:
            msg = f"No truth value for {phi}"
            raise UsageError(msg) from None
    if isinstance(phi, Not):
        return not evaluate(phi.body, assignment)
    if isinstance(phi, And):
        return all(evaluate(p, assignment) for p in phi.parts)
    if isinstance(phi, Or):
        return any(evaluate(p, assignment) for p in phi.parts)
    if isinstance(phi, Implies):
        return not evaluate(phi.premise, assignment) or evaluate(phi.conclusion, assignment)
    msg = f"Cannot evaluate quantified statement {phi}"
    raise UsageError(msg)


def evaluate_cnf(clauses: tuple[Clause, ...], assignment: Mapping[Equation, bool]) -> bool:
    """Truth value of a clause conjunction under the same kind of assignment."""
    return all(
        any(not assignment[eq] for eq in clause.disequalities) or any(assignment[eq] for eq in clause.equalities)
        for clause in clauses
    )
