"""Exact noncommutative polynomial arithmetic over the rationals.

Words are stored as ``str`` objects whose characters encode variables
(``chr(LETTER_BASE + index)``), so concatenation, reversal and subword search
are plain string operations. Coefficients are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Union

from src.ncproofs.errors import ParseError, UsageError

if TYPE_CHECKING:
    from src.ncproofs.order import MonomialOrder

LETTER_BASE = 0x100
IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

Word = str
Scalar = Union[int, Fraction]

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


def default_key(word: Word) -> tuple[int, Word]:
    """Degree-then-rank-lexicographic sort key used when no order is attached."""
    return (len(word), word)


class FreeAlgebra:
    """The free algebra over a finite, ordered set of named variables."""

    __slots__ = ("_index", "names")

    def __init__(self, names: Iterable[str]) -> None:
        """Declare the variables; declaration order fixes their ranks.

        Raises:
            UsageError: On invalid or repeated names.
        """
        self.names: tuple[str, ...] = tuple(names)
        self._index: dict[str, int] = {}
        for position, name in enumerate(self.names):
            if not IDENTIFIER.fullmatch(name):
                msg = f"Invalid variable name {name!r}"
                raise UsageError(msg)
            if name in self._index:
                msg = f"Variable {name!r} declared twice"
                raise UsageError(msg)
            self._index[name] = position

    def __repr__(self) -> str:
        return f"Free Algebra on {len(self.names)} generators ({', '.join(self.names)}) over Rational Field"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FreeAlgebra):
            return NotImplemented
        return self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        """Rank of a variable name."""
        try:
            return self._index[name]
        except KeyError:
            msg = f"Unknown variable {name!r}"
            raise UsageError(msg) from None

    def letter(self, name: str) -> str:
        """The single-character word encoding a variable."""
        return chr(LETTER_BASE + self.index(name))

    def name_of(self, letter: str) -> str:
        """Inverse of :meth:`letter`."""
        position = ord(letter) - LETTER_BASE
        if not 0 <= position < len(self.names):
            msg = f"Letter {letter!r} does not belong to {self!r}"
            raise UsageError(msg)
        return self.names[position]

    def word(self, *names: str) -> Word:
        """Build a word from variable names (no names gives the empty word)."""
        return "".join(self.letter(name) for name in names)

    def word_names(self, word: Word) -> list[str]:
        """Variable names of a word, left to right."""
        return [self.name_of(letter) for letter in word]

    def format_word(self, word: Word) -> str:
        """Render a word as ``a*b^2*c``; the empty word renders as ``1``."""
        if not word:
            return "1"
        parts: list[str] = []
        run_start = 0
        for position in range(1, len(word) + 1):
            if position == len(word) or word[position] != word[run_start]:
                name = self.name_of(word[run_start])
                length = position - run_start
                parts.append(name if length == 1 else f"{name}^{length}")
                run_start = position
        return "*".join(parts)

    def extend(self, names: Iterable[str]) -> FreeAlgebra:
        """A larger algebra with extra variables appended (existing words keep their letters)."""
        return FreeAlgebra([*self.names, *names])

    def gen(self, name: str) -> Polynomial:
        """The variable ``name`` as a polynomial."""
        return Polynomial(self, {self.letter(name): 1})

    def gens(self) -> tuple[Polynomial, ...]:
        """All variables as polynomials, in declaration order."""
        return tuple(self.gen(name) for name in self.names)

    def one(self) -> Polynomial:
        """The multiplicative identity (the empty word)."""
        return Polynomial(self, {"": 1})

    def zero(self) -> Polynomial:
        """The zero polynomial."""
        return Polynomial(self)

    def monomial(self, word: Word, coeff: Scalar = 1) -> Polynomial:
        """A single term."""
        return Polynomial(self, {word: coeff})

    def parse(self, text: str) -> Polynomial:
        """Parse polynomial text over this algebra."""
        return parse(text, self)


class Polynomial:
    """An immutable element of a free algebra: a map from words to nonzero rationals."""

    __slots__ = ("_hash", "_terms", "algebra")

    def __init__(self, algebra: FreeAlgebra, terms: Mapping[Word, Scalar] | None = None) -> None:
        """Build a polynomial; zero coefficients are dropped."""
        self.algebra = algebra
        self._terms: dict[Word, Fraction] = {}
        if terms:
            for word, coeff in terms.items():
                if coeff:
                    self._terms[word] = Fraction(coeff)
        self._hash: int | None = None

    @classmethod
    def _from_dict(cls, algebra: FreeAlgebra, terms: dict[Word, Fraction]) -> Polynomial:
        poly = cls.__new__(cls)
        poly.algebra = algebra
        poly._terms = terms
        poly._hash = None
        return poly

    # ------------------------------------------------------------------ access

    def items(self) -> Iterator[tuple[Word, Fraction]]:
        """Iterate over (word, coefficient) pairs in storage order."""
        return iter(self._terms.items())

    def as_dict(self) -> dict[Word, Fraction]:
        """A fresh mutable copy of the term map."""
        return dict(self._terms)

    def terms(self, order: MonomialOrder | None = None) -> list[tuple[Fraction, Word]]:
        """(coefficient, word) pairs, largest word first."""
        key = order.key if order is not None else default_key
        return [(self._terms[word], word) for word in sorted(self._terms, key=key, reverse=True)]

    def monomials(self, order: MonomialOrder | None = None) -> list[Word]:
        """Words with nonzero coefficient, largest first."""
        key = order.key if order is not None else default_key
        return sorted(self._terms, key=key, reverse=True)

    def coefficient(self, word: Word) -> Fraction:
        """Coefficient of ``word`` (zero when absent)."""
        return self._terms.get(word, Fraction(0))

    def is_zero(self) -> bool:
        """Whether this is the zero polynomial."""
        return not self._terms

    def is_monomial(self) -> bool:
        """Whether there is exactly one term."""
        return len(self._terms) == 1

    def is_binomial(self) -> bool:
        """Whether the polynomial is m1 - m2 or a single monomial, both with unit coefficients."""
        coeffs = sorted(self._terms.values())
        return coeffs in ([Fraction(1)], [Fraction(-1)], [Fraction(-1), Fraction(1)])

    def degree(self) -> int:
        """Maximal word length; -1 for zero."""
        return max((len(word) for word in self._terms), default=-1)

    def variables(self) -> set[str]:
        """Names of the variables occurring in some term."""
        return {self.algebra.name_of(letter) for word in self._terms for letter in word}

    def leading_word(self, order: MonomialOrder | None = None) -> Word:
        """The maximal word; see :func:`src.ncproofs.order.leading_term` for the checked variant."""
        if not self._terms:
            msg = "The zero polynomial has no leading term"
            raise UsageError(msg)
        key = order.key if order is not None else default_key
        return max(self._terms, key=key)

    def monic(self, order: MonomialOrder | None = None) -> Polynomial:
        """Scale so that the leading coefficient is one."""
        if not self._terms:
            return self
        lead = self._terms[self.leading_word(order)]
        if lead == 1:
            return self
        return self._from_dict(self.algebra, {w: c / lead for w, c in self._terms.items()})

    def is_integral(self) -> bool:
        """Whether every coefficient is an integer."""
        return all(coeff.denominator == 1 for coeff in self._terms.values())

    # -------------------------------------------------------------- arithmetic

    def _check(self, other: Polynomial) -> None:
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            msg = f"Polynomials live in different algebras: {self.algebra!r} and {other.algebra!r}"
            raise UsageError(msg)

    def _coerce(self, other: object) -> Polynomial | None:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int | Fraction):
            return Polynomial(self.algebra, {"": other})
        return None

    def __add__(self, other: object) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        result = dict(self._terms)
        for word, coeff in rhs._terms.items():
            total = result.get(word, 0) + coeff
            if total:
                result[word] = total
            else:
                result.pop(word, None)
        return self._from_dict(self.algebra, result)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return self._from_dict(self.algebra, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other: object) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> Polynomial:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def scale(self, factor: Scalar) -> Polynomial:
        """Multiply every coefficient by ``factor``."""
        if not factor:
            return self.algebra.zero()
        return self._from_dict(self.algebra, {w: c * factor for w, c in self._terms.items()})

    def multiply_words(self, left: Word, right: Word, factor: Scalar = 1) -> Polynomial:
        """Return ``factor * left * self * right`` for words ``left`` and ``right``."""
        if not factor:
            return self.algebra.zero()
        return self._from_dict(self.algebra, {left + w + right: c * factor for w, c in self._terms.items()})

    def __mul__(self, other: object) -> Polynomial:
        if isinstance(other, int | Fraction):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        result: dict[Word, Fraction] = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                word = w1 + w2
                total = result.get(word, 0) + c1 * c2
                if total:
                    result[word] = total
                else:
                    del result[word]
        return self._from_dict(self.algebra, result)

    def __rmul__(self, other: object) -> Polynomial:
        if isinstance(other, int | Fraction):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other: object) -> Polynomial:
        if isinstance(other, int | Fraction) and other:
            return self.scale(Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, exponent: int) -> Polynomial:
        if exponent < 0:
            msg = "Negative powers are not defined in a free algebra"
            raise UsageError(msg)
        result = self.algebra.one()
        for _ in range(exponent):
            result = result * self
        return result

    def substitute(self, images: Mapping[str, Polynomial], target: FreeAlgebra | None = None) -> Polynomial:
        """Replace variables by polynomials; unmapped variables stay themselves.

        Args:
            images: Variable name to replacement polynomial.
            target: Algebra of the result; defaults to this polynomial's algebra.

        Returns:
            The substituted polynomial over ``target``.
        """
        algebra = target or self.algebra
        result = algebra.zero()
        for word, coeff in self._terms.items():
            term = algebra.one().scale(coeff)
            for letter in word:
                name = self.algebra.name_of(letter)
                image = images.get(name)
                term = term * (image if image is not None else algebra.gen(name))
            result = result + term
        return result

    def lift(self, algebra: FreeAlgebra) -> Polynomial:
        """View this polynomial in a larger algebra that extends this one."""
        if algebra.names[: len(self.algebra.names)] != self.algebra.names:
            msg = "Target algebra does not extend the polynomial's algebra"
            raise UsageError(msg)
        return self._from_dict(algebra, dict(self._terms))

    # ---------------------------------------------------------------- equality

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int | Fraction):
            other = Polynomial(self.algebra, {"": other})
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.algebra == other.algebra and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    # --------------------------------------------------------------- rendering

    def format(self, order: MonomialOrder | None = None) -> str:
        """Render with terms in ascending order, e.g. ``-y + y*x``."""
        if not self._terms:
            return "0"
        key = order.key if order is not None else default_key
        pieces: list[str] = []
        for position, word in enumerate(sorted(self._terms, key=key)):
            coeff = self._terms[word]
            magnitude = abs(coeff)
            if not word:
                body = str(magnitude)
            elif magnitude == 1:
                body = self.algebra.format_word(word)
            else:
                body = f"{magnitude}*{self.algebra.format_word(word)}"
            if position == 0:
                pieces.append(f"-{body}" if coeff < 0 else body)
            else:
                pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(pieces)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Polynomial({self.format()!r})"


class _PolynomialParser:
    """Recursive-descent parser for sums of products with powers and parentheses."""

    def __init__(self, text: str, algebra: FreeAlgebra) -> None:
        self.text = text
        self.algebra = algebra
        self.tokens: list[tuple[str, str, int]] = []
        position = 0
        while position < len(text):
            if text[position:].strip() == "":
                break
            match = _TOKEN.match(text, position)
            if match is None:
                offset = len(text[position:]) - len(text[position:].lstrip())
                msg = f"Unexpected character {text[position + offset]!r}"
                raise ParseError(msg, position + offset)
            kind = match.lastgroup or "op"
            self.tokens.append((kind, match.group(kind), match.start(kind)))
            position = match.end()
        self.pos = 0

    def _peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _position(self) -> int:
        token = self._peek()
        return token[2] if token else len(self.text)

    def _accept(self, op: str) -> bool:
        token = self._peek()
        if token is not None and token[0] == "op" and token[1] == op:
            self.pos += 1
            return True
        return False

    def parse(self) -> Polynomial:
        if not self.tokens:
            msg = "Empty polynomial"
            raise ParseError(msg, 0)
        result = self._sum()
        leftover = self._peek()
        if leftover is not None:
            msg = f"Unexpected token {leftover[1]!r}"
            raise ParseError(msg, leftover[2])
        return result

    def _sum(self) -> Polynomial:
        negate = False
        if self._accept("-"):
            negate = True
        else:
            self._accept("+")
        result = self._product()
        if negate:
            result = -result
        while True:
            if self._accept("+"):
                result = result + self._product()
            elif self._accept("-"):
                result = result - self._product()
            else:
                return result

    def _product(self) -> Polynomial:
        result = self._power()
        while self._accept("*"):
            result = result * self._power()
        return result

    def _power(self) -> Polynomial:
        base = self._atom()
        if self._accept("^"):
            token = self._peek()
            if token is None or token[0] != "num" or "/" in token[1]:
                msg = "Expected a non-negative integer exponent"
                raise ParseError(msg, self._position())
            self.pos += 1
            return base ** int(token[1])
        return base

    def _atom(self) -> Polynomial:
        token = self._peek()
        if token is None:
            msg = "Unexpected end of input"
            raise ParseError(msg, len(self.text))
        kind, value, position = token
        if kind == "num":
            self.pos += 1
            return self.algebra.one().scale(Fraction(value))
        if kind == "name":
            if value not in self.algebra:
                msg = f"Unknown identifier {value!r}"
                raise ParseError(msg, position)
            self.pos += 1
            return self.algebra.gen(value)
        if self._accept("("):
            inner = self._sum()
            if not self._accept(")"):
                msg = "Expected ')'"
                raise ParseError(msg, self._position())
            return inner
        msg = f"Unexpected token {value!r}"
        raise ParseError(msg, position)


def parse(text: str, algebra: FreeAlgebra | Sequence[str]) -> Polynomial:
    """Parse polynomial text such as ``"y^3 - y"`` or ``"1/2*a*b - c"``.

    Args:
        text: The polynomial in the text grammar.
        algebra: The algebra, or a list of variable names to build one from.

    Returns:
        The denoted polynomial.

    Raises:
        ParseError: On unknown identifiers or syntax errors.
    """
    if not isinstance(algebra, FreeAlgebra):
        algebra = FreeAlgebra(algebra)
    return _PolynomialParser(text, algebra).parse()


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    """Termwise sum of two polynomials over the same algebra."""
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Noncommutative product of two polynomials over the same algebra."""
    return p * q


def _scalar_class(p: Polynomial) -> Polynomial:
    return p.monic()


@dataclass(frozen=True)
class AdjointMap:
    """An involution on the variables of an algebra, lifted to an anti-automorphism."""

    algebra: FreeAlgebra
    pairs: Mapping[str, str]

    def __post_init__(self) -> None:
        for name, partner in self.pairs.items():
            if name not in self.algebra or partner not in self.algebra:
                msg = f"Adjoint pair ({name}, {partner}) uses unknown variables"
                raise UsageError(msg)
            if self.pairs.get(partner) != name:
                msg = f"Adjoint map is not an involution at {name!r}"
                raise UsageError(msg)

    @classmethod
    def from_pairs(cls, algebra: FreeAlgebra, pairs: Iterable[tuple[str, str]]) -> AdjointMap:
        """Build from (x, x_adj) pairs; a pair (x, x) declares x self-adjoint."""
        mapping: dict[str, str] = {}
        for name, partner in pairs:
            mapping[name] = partner
            mapping[partner] = name
        return cls(algebra, mapping)

    @classmethod
    def from_suffix(
        cls, algebra: FreeAlgebra, suffix: str = "_adj", self_adjoint: Iterable[str] = ()
    ) -> AdjointMap:
        """Pair every ``x`` with ``x<suffix>`` when both are declared."""
        pairs = [(name, name + suffix) for name in algebra.names if name + suffix in algebra]
        pairs.extend((name, name) for name in self_adjoint)
        return cls.from_pairs(algebra, pairs)

    def partner(self, name: str) -> str:
        """Adjoint partner of a variable."""
        try:
            return self.pairs[name]
        except KeyError:
            msg = f"Variable {name!r} has no adjoint partner"
            raise UsageError(msg) from None

    def letter_table(self) -> dict[int, str]:
        """``str.translate`` table mapping each letter to its partner's letter."""
        return {
            ord(self.algebra.letter(name)): self.algebra.letter(partner) for name, partner in self.pairs.items()
        }

    def __call__(self, p: Polynomial) -> Polynomial:
        return adjoint(p, self)


def _reverse_map(p: Polynomial, table: Mapping[int, str], relation: str) -> dict[Word, Fraction]:
    missing = sorted(name for name in p.variables() if ord(p.algebra.letter(name)) not in table)
    if missing:
        msg = f"Variable {missing[0]!r} has no {relation} partner"
        raise UsageError(msg)
    return {word[::-1].translate(table): coeff for word, coeff in p.items()}


def adjoint(p: Polynomial, m: AdjointMap) -> Polynomial:
    """Apply the involution: reverse every word and map each letter to its partner."""
    return Polynomial(p.algebra, _reverse_map(p, m.letter_table(), "adjoint"))


def dedupe_scalar_multiples(polys: Iterable[Polynomial]) -> list[Polynomial]:
    """Drop zero polynomials and every polynomial that is a scalar multiple of an earlier one."""
    seen: set[Polynomial] = set()
    result: list[Polynomial] = []
    for poly in polys:
        if not poly:
            continue
        key = _scalar_class(poly)
        if key in seen:
            continue
        seen.add(key)
        result.append(poly)
    return result


def add_adj(polys: Sequence[Polynomial], m: AdjointMap) -> list[Polynomial]:
    """Append the adjoint of every polynomial, dropping scalar-multiple duplicates."""
    return dedupe_scalar_multiples([*polys, *(adjoint(p, m) for p in polys)])


def _as_poly(value: Polynomial | str, algebra: FreeAlgebra | None) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    if algebra is None:
        msg = "Variable names need an algebra"
        raise UsageError(msg)
    return algebra.gen(value)


def pinv(
    a: Polynomial | str,
    b: Polynomial | str,
    a_adj: Polynomial | str,
    b_adj: Polynomial | str,
    algebra: FreeAlgebra | None = None,
) -> list[Polynomial]:
    """Polynomials encoding the four Penrose identities for ``b`` being the Moore-Penrose inverse of ``a``.

    Returns:
        ``[a*b*a - a, b*a*b - b, b_adj*a_adj - a*b, a_adj*b_adj - b*a]``.
    """
    pa, pb, pa_adj, pb_adj = (_as_poly(v, algebra) for v in (a, b, a_adj, b_adj))
    return [
        pa * pb * pa - pa,
        pb * pa * pb - pb,
        pb_adj * pa_adj - pa * pb,
        pa_adj * pb_adj - pb * pa,
    ]


def identity_relations(
    i: str,
    i_adj: str,
    algebra: FreeAlgebra,
    right_units: Iterable[str] = (),
    left_units: Iterable[str] = (),
) -> list[Polynomial]:
    """Relations making ``i`` behave like an identity operator.

    Args:
        i: The identity variable.
        i_adj: Its adjoint variable (self-adjointness gives ``i - i_adj``).
        algebra: Algebra containing all names.
        right_units: Variables ``a`` with ``a*i = a``.
        left_units: Variables ``b`` with ``i*b = b``.

    Returns:
        ``[i*i - i, i - i_adj, a*i - a, ..., i*b - b, ...]``.
    """
    pi = algebra.gen(i)
    relations = [pi * pi - pi, pi - algebra.gen(i_adj)]
    relations.extend(algebra.gen(name) * pi - algebra.gen(name) for name in right_units)
    relations.extend(pi * algebra.gen(name) - algebra.gen(name) for name in left_units)
    return relations


@dataclass(frozen=True)
class ConjugationMap:
    """Transposition and complex conjugation on variables ``x, x_adj, x_tr, x_c``.

    Transposition reverses words, conjugation keeps their order; composing two
    different operations among adjoint, transpose and conjugate gives the third.
    """

    algebra: FreeAlgebra
    transpose_table: Mapping[int, str]
    conjugate_table: Mapping[int, str]

    @classmethod
    def from_suffixes(
        cls, algebra: FreeAlgebra, adj: str = "_adj", tr: str = "_tr", c: str = "_c"
    ) -> ConjugationMap:
        """Pair up every base name that has all three decorated partners declared."""
        transpose: dict[int, str] = {}
        conjugate: dict[int, str] = {}
        for name in algebra.names:
            family = (name, name + adj, name + tr, name + c)
            if not all(member in algebra for member in family):
                continue
            base, star, trans, conj = (algebra.letter(member) for member in family)
            transpose.update({ord(base): trans, ord(trans): base, ord(star): conj, ord(conj): star})
            conjugate.update({ord(base): conj, ord(conj): base, ord(star): trans, ord(trans): star})
        return cls(algebra, transpose, conjugate)

    def transpose(self, p: Polynomial) -> Polynomial:
        """``(PQ)^T = Q^T P^T`` applied termwise."""
        return Polynomial(p.algebra, _reverse_map(p, self.transpose_table, "transpose"))

    def conjugate(self, p: Polynomial) -> Polynomial:
        """``(PQ)^C = P^C Q^C`` applied termwise."""
        missing = sorted(n for n in p.variables() if ord(p.algebra.letter(n)) not in self.conjugate_table)
        if missing:
            msg = f"Variable {missing[0]!r} has no conjugate partner"
            raise UsageError(msg)
        return Polynomial(p.algebra, {word.translate(self.conjugate_table): c for word, c in p.items()})


def add_tr_c(polys: Sequence[Polynomial], m: ConjugationMap) -> list[Polynomial]:
    """Append transposed and conjugated identities, dropping scalar-multiple duplicates."""
    return dedupe_scalar_multiples(
        [*polys, *(m.transpose(p) for p in polys), *(m.conjugate(p) for p in polys)]
    )
