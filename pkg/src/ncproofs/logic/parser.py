"""Text syntax for operator statements.

A statement is a block of lines::

    var a, p, q : U -> V
    var b : V -> U
    involution _adj
    forall a, p, q
    exists b
    (a = p*a_adj*a & a = a*a_adj*q) -> (a*b*a = a & b*a*b = b)

``var`` lines declare sorts, ``forall``/``exists`` lines give the quantifier
prefix in order, ``involution`` pairs every ``x`` with ``x<suffix>`` (declaring
the partner with the reversed sort when needed) and the remaining lines form
the body. Connectives are ``~``, ``&``, ``|`` and ``->``; atoms are ``s = t``
and ``s != t``. ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any

from src.ncproofs.errors import ParseError, SortError
from src.ncproofs.freealg import IDENTIFIER, AdjointMap, FreeAlgebra
from src.ncproofs.logic.formulas import (
    Equation,
    Exists,
    ForAll,
    Formula,
    Implies,
    Not,
    Shape,
    conjunction,
    disjunction,
    shape,
)
from src.ncproofs.logic.terms import OpTerm, Product, Scaled, Sort, SortContext, Sum, Zero

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>->|!=|[=+\-*()&|~]))")
_VAR_LINE = re.compile(r"^var\s+(?P<names>[^:]+):\s*(?P<source>\S+)\s*->\s*(?P<target>\S+)\s*$")

Node = tuple[Any, ...]


@dataclass(frozen=True)
class Statement:
    """A parsed operator statement with its sort context and polynomial algebra."""

    formula: Formula
    context: SortContext
    algebra: FreeAlgebra
    universals: tuple[str, ...]
    existentials: tuple[str, ...]
    adjoint: AdjointMap | None = None
    text: str = ""

    @property
    def shape(self) -> Shape:
        """Quantifier shape of the formula."""
        return shape(self.formula)

    def __str__(self) -> str:
        return str(self.formula)


class _FormulaParser:
    def __init__(self, text: str, context: SortContext, offset: int = 0) -> None:
        self.context = context
        self.offset = offset
        self.tokens: list[tuple[str, str, int]] = []
        position = 0
        while position < len(text):
            if not text[position:].strip():
                break
            match = _TOKEN.match(text, position)
            if match is None:
                column = position + len(text[position:]) - len(text[position:].lstrip())
                msg = f"Unexpected character {text[column]!r}"
                raise ParseError(msg, offset + column)
            kind = match.lastgroup or "op"
            self.tokens.append((kind, match.group(kind), offset + match.start(kind)))
            position = match.end()
        self.index = 0
        self.end = offset + len(text)

    def _peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _position(self) -> int:
        token = self._peek()
        return token[2] if token is not None else self.end

    def _accept(self, op: str) -> bool:
        token = self._peek()
        if token is not None and token[0] == "op" and token[1] == op:
            self.index += 1
            return True
        return False

    def _expect(self, op: str) -> None:
        if not self._accept(op):
            msg = f"Expected {op!r}"
            raise ParseError(msg, self._position())

    def parse(self) -> Formula:
        if not self.tokens:
            msg = "The statement has no body"
            raise ParseError(msg, self.offset)
        formula = self._implication()
        if self._peek() is not None:
            msg = f"Unexpected token {self._peek()[1]!r}"  # type: ignore[index]
            raise ParseError(msg, self._position())
        return formula

    def _implication(self) -> Formula:
        premise = self._disjunction()
        if self._accept("->"):
            return Implies(premise, self._implication())
        return premise

    def _disjunction(self) -> Formula:
        parts = [self._conjunction()]
        while self._accept("|"):
            parts.append(self._conjunction())
        return disjunction(*parts)

    def _conjunction(self) -> Formula:
        parts = [self._unary()]
        while self._accept("&"):
            parts.append(self._unary())
        return conjunction(*parts)

    def _unary(self) -> Formula:
        if self._accept("~"):
            return Not(self._unary())
        token = self._peek()
        if token is not None and token[1] == "(":
            saved = self.index
            try:
                return self._equation()
            except ParseError:
                self.index = saved
            self._expect("(")
            inner = self._implication()
            self._expect(")")
            return inner
        return self._equation()

    def _equation(self) -> Formula:
        start = self._position()
        lhs = self._sum()
        if self._accept("="):
            negated = False
        elif self._accept("!="):
            negated = True
        else:
            msg = "Expected '=' or '!='"
            raise ParseError(msg, self._position())
        rhs = self._sum()
        equation = _typed_equation(lhs, rhs, self.context, start)
        return Not(equation) if negated else equation

    def _sum(self) -> Node:
        terms: list[Node] = []
        negative = self._accept("-")
        first = self._product()
        terms.append(("neg", first) if negative else first)
        while True:
            if self._accept("+"):
                terms.append(self._product())
            elif self._accept("-"):
                terms.append(("neg", self._product()))
            else:
                break
        return terms[0] if len(terms) == 1 else ("sum", terms)

    def _product(self) -> Node:
        factors = [self._factor()]
        while self._accept("*"):
            factors.append(self._factor())
        return factors[0] if len(factors) == 1 else ("prod", factors)

    def _factor(self) -> Node:
        token = self._peek()
        if token is None:
            msg = "Unexpected end of statement"
            raise ParseError(msg, self.end)
        kind, value, position = token
        if kind == "int":
            self.index += 1
            return ("int", int(value), position)
        if kind == "ident":
            self.index += 1
            if value not in self.context:
                msg = f"Undeclared variable {value!r}"
                raise ParseError(msg, position)
            return ("var", value, position)
        if self._accept("("):
            inner = self._sum()
            self._expect(")")
            return inner
        msg = f"Unexpected token {value!r}"
        raise ParseError(msg, position)


def _infer(node: Node, context: SortContext) -> Sort | None:
    kind = node[0]
    if kind == "var":
        return context.sort_of(node[1])
    if kind == "int":
        return None
    if kind == "neg":
        return _infer(node[1], context)
    if kind == "sum":
        for child in node[1]:
            sort = _infer(child, context)
            if sort is not None:
                return sort
        return None
    factors = [f for f in node[1] if f[0] != "int"]
    sorts = [_infer(f, context) for f in factors]
    if not sorts or any(s is None for s in sorts):
        return None
    result = sorts[-1]
    for sort in reversed(sorts[:-1]):
        result = result.then(sort)  # type: ignore[union-attr, arg-type]
    return result


def _check(node: Node, expected: Sort | None, context: SortContext) -> OpTerm:
    kind = node[0]
    if kind == "var":
        var = context.var(node[1])
        if expected is not None and var.sort != expected:
            msg = f"Variable {node[1]} has sort {var.sort}, expected {expected}"
            raise SortError(msg)
        return var
    if kind == "int":
        if node[1] != 0:
            msg = f"The integer {node[1]} is not a morphism; only 0 may stand alone"
            raise SortError(msg)
        if expected is None:
            msg = "Cannot infer the sort of 0"
            raise SortError(msg)
        return Zero(expected)
    if kind == "neg":
        return Scaled(-1, _check(node[1], expected, context))
    if kind == "sum":
        sort = expected or _infer(node, context)
        if sort is None:
            msg = "Cannot infer the sort of a sum of zeros"
            raise SortError(msg)
        children = [_check(child, sort, context) for child in node[1]]
        term = children[0]
        for child in children[1:]:
            term = Sum(term, child)
        return term
    coeff = 1
    factors = []
    for factor in node[1]:
        if factor[0] == "int":
            coeff *= factor[1]
        else:
            factors.append(factor)
    if coeff == 0:
        sort = expected or _infer(node, context)
        if sort is None:
            msg = "Cannot infer the sort of a zero product"
            raise SortError(msg)
        return Zero(sort)
    if not factors:
        msg = f"The integer {coeff} is not a morphism"
        raise SortError(msg)
    typed = []
    for factor in factors:
        sort = _infer(factor, context)
        if sort is None:
            msg = "Cannot infer the sort of a factor; annotate zeros through the other side"
            raise SortError(msg)
        typed.append(_check(factor, sort, context))
    term = typed[-1]
    for factor in reversed(typed[:-1]):
        term = Product(factor, term)
    if expected is not None and term.sort != expected:
        msg = f"Term {term} has sort {term.sort}, expected {expected}"
        raise SortError(msg)
    return term if coeff == 1 else Scaled(coeff, term)


def _typed_equation(lhs: Node, rhs: Node, context: SortContext, position: int) -> Equation:
    sort = _infer(lhs, context) or _infer(rhs, context)
    if sort is None:
        msg = f"Cannot infer the sort of the equation at position {position}"
        raise SortError(msg)
    return Equation(_check(lhs, sort, context), _check(rhs, sort, context))


def parse_term(text: str, context: SortContext, sort: Sort | None = None) -> OpTerm:
    """Parse a single sorted term such as ``a_adj*q*p_adj``.

    Raises:
        ParseError: On syntax errors.
        SortError: If the term is ill-sorted or its sort cannot be inferred.
    """
    parser = _FormulaParser(text, context)
    node = parser._sum()  # noqa: SLF001
    if parser._peek() is not None:  # noqa: SLF001
        msg = "Unexpected trailing input"
        raise ParseError(msg, parser._position())  # noqa: SLF001
    return _check(node, sort or _infer(node, context), context)


def _names(text: str, line_start: int) -> list[str]:
    names = [name.strip() for name in text.split(",") if name.strip()]
    for name in names:
        if not IDENTIFIER.fullmatch(name):
            msg = f"Invalid variable name {name!r}"
            raise ParseError(msg, line_start)
    return names


def parse_statement(text: str) -> Statement:
    """Parse the statement syntax described in the module docstring.

    Returns:
        The statement with its quantifier prefix applied to the body.

    Raises:
        ParseError: On syntax errors, with the character position.
        SortError: If some term or equation is ill-sorted.
    """
    context = SortContext()
    declared: list[str] = []
    prefix: list[tuple[str, list[str]]] = []
    suffix: str | None = None
    body_parts: list[tuple[str, int]] = []
    position = 0
    for raw in text.splitlines(keepends=True):
        line = raw.split("#", 1)[0].strip()
        start = position
        position += len(raw)
        if not line:
            continue
        keyword = line.split(None, 1)[0]
        rest = line[len(keyword) :].strip()
        if keyword == "var":
            match = _VAR_LINE.match(line)
            if match is None:
                msg = "Expected 'var <names> : <source> -> <target>'"
                raise ParseError(msg, start)
            for name in _names(match.group("names"), start):
                context.declare(name, Sort(match.group("source"), match.group("target")))
                declared.append(name)
        elif keyword == "involution":
            suffix = rest or "_adj"
        elif keyword in ("forall", "exists"):
            names = _names(rest, start)
            if prefix and prefix[-1][0] == keyword:
                prefix[-1][1].extend(names)
            else:
                prefix.append((keyword, names))
        else:
            body_parts.append((raw, start))

    adjoint_pairs: list[tuple[str, str]] = []
    if suffix is not None:
        for name in list(declared):
            if name.endswith(suffix) and name[: -len(suffix)] in context:
                continue
            partner = name + suffix
            sort = context.sort_of(name)
            if partner not in context:
                context.declare(partner, Sort(sort.target, sort.source))
                declared.append(partner)
            elif context.sort_of(partner) != Sort(sort.target, sort.source):
                msg = f"Adjoint {partner} must have sort {sort.target} -> {sort.source}"
                raise SortError(msg)
            adjoint_pairs.append((name, partner))
            for _, names in prefix:
                if name in names and partner not in names:
                    names.append(partner)

    if not body_parts:
        msg = "The statement has no body"
        raise ParseError(msg, len(text))
    offset = body_parts[0][1]
    body_text = "".join(part.split("#", 1)[0] + ("\n" if part.endswith("\n") else "") for part, _ in body_parts)
    formula = _FormulaParser(body_text, context, offset).parse()

    quantified = [name for _, names in prefix for name in names]
    for name in quantified:
        if name not in context:
            msg = f"Quantified variable {name!r} is not declared"
            raise SortError(msg)
    for kind, names in reversed(prefix):
        formula = ForAll(tuple(names), formula) if kind == "forall" else Exists(tuple(names), formula)

    algebra = FreeAlgebra(declared)
    adjoint = AdjointMap.from_pairs(algebra, adjoint_pairs) if suffix is not None else None
    universals = tuple(name for kind, names in prefix if kind == "forall" for name in names)
    existentials = tuple(name for kind, names in prefix if kind == "exists" for name in names)
    return Statement(formula, context, algebra, universals, existentials, adjoint, text)


__all__ = ["Statement", "parse_statement", "parse_term"]
