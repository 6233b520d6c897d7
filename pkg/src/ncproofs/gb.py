"""Buchberger-style completion in the free algebra with cofactor tracing.

The partial basis is a list of monic elements. Every element remembers how it
was obtained from earlier elements (or from a generator); certificates with
respect to the generators are back-substituted only when someone asks for
them.
"""

from __future__ import annotations

import enum
import logging
from collections.abc import Callable, Hashable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, TypeVar

from src.ncproofs.certificate import Certificate, CofactorKey
from src.ncproofs.errors import UsageError
from src.ncproofs.freealg import FreeAlgebra, Polynomial
from src.ncproofs.order import MonomialOrder

if TYPE_CHECKING:
    from src.ncproofs.freealg import Word
    from src.ncproofs.order import SortKey

logger = logging.getLogger(__name__)

Terms = dict[str, Fraction]
Cofactors = dict[CofactorKey, Fraction]
K = TypeVar("K", bound=Hashable)


class AmbiguityKind(enum.Enum):
    """Overlap of two leading monomials or inclusion of one in the other."""

    OVERLAP = "overlap"
    INCLUSION = "inclusion"


@dataclass(frozen=True, order=True)
class Ambiguity:
    """Positions with ``l1*lm(g_i)*r1 == l2*lm(g_j)*r2``, a common multiple of length ``degree``."""

    degree: int
    i: int
    j: int
    l1: str
    r1: str
    l2: str
    r2: str
    kind: AmbiguityKind = field(compare=False)


def _axpy(target: dict[K, Fraction], key: K, value: Fraction) -> None:
    total = target.get(key, 0) + value
    if total:
        target[key] = total
    else:
        target.pop(key, None)


def _overlaps(i: int, u: Word, j: int, v: Word) -> Iterator[Ambiguity]:
    """Proper overlaps where a suffix of ``u`` is a prefix of ``v``."""
    for k in range(1, min(len(u), len(v))):
        if u.endswith(v[:k]):
            yield Ambiguity(len(u) + len(v) - k, i, j, "", v[k:], u[: len(u) - k], "", AmbiguityKind.OVERLAP)


def _inclusion(i: int, big: Word, j: int, small: Word) -> Ambiguity | None:
    position = big.find(small)
    if position < 0:
        return None
    right = big[position + len(small) :]
    return Ambiguity(len(big), i, j, "", "", big[:position], right, AmbiguityKind.INCLUSION)


class TracedPolynomial:
    """A polynomial together with a certificate expressing it through the generators."""

    __slots__ = ("_cert", "_resolve", "poly")

    def __init__(
        self,
        poly: Polynomial,
        cert: Certificate | None = None,
        resolve: Callable[[], Certificate] | None = None,
    ) -> None:
        """Wrap ``poly``; the certificate is given directly or computed lazily by ``resolve``."""
        self.poly = poly
        self._cert = cert
        self._resolve = resolve

    @property
    def cert(self) -> Certificate:
        """The certificate, computed on first access."""
        if self._cert is None:
            self._cert = self._resolve() if self._resolve is not None else Certificate()
            self._resolve = None
        return self._cert

    def __repr__(self) -> str:
        return f"TracedPolynomial({self.poly.format()!r})"

    def __str__(self) -> str:
        return self.poly.format()


class _Element:
    """A monic basis element with its origin."""

    __slots__ = ("active", "generator", "lm", "rep", "terms")

    def __init__(self, terms: Terms, lm: str, rep: Cofactors, generator: int | None) -> None:
        self.terms = terms
        self.lm = lm
        # generator-level cofactors when ``generator`` is set, basis-level otherwise
        self.rep = rep
        self.generator = generator
        self.active = False


class _Trace:
    """Back-substitution of basis-level cofactors down to the generators, for one completion run."""

    __slots__ = ("elements", "memo")

    def __init__(self) -> None:
        self.elements: list[_Element] = []
        self.memo: dict[int, Cofactors] = {}

    def generator_cofactors(self, index: int) -> Cofactors:
        needed: list[int] = []
        stack = [index]
        seen: set[int] = set()
        while stack:
            current = stack.pop()
            if current in seen or current in self.memo:
                continue
            seen.add(current)
            needed.append(current)
            element = self.elements[current]
            if element.generator is None:
                stack.extend(k for (_, k, _) in element.rep)
        for current in sorted(needed):
            element = self.elements[current]
            self.memo[current] = dict(element.rep) if element.generator is not None else self.substitute(element.rep)
        return self.memo[index]

    def substitute(self, rep: Cofactors) -> Cofactors:
        result: Cofactors = {}
        for (left, k, right), coeff in rep.items():
            inner = self.memo[k] if k in self.memo else self.generator_cofactors(k)
            for (l2, gen, r2), c2 in inner.items():
                _axpy(result, (left + l2, gen, r2 + right), coeff * c2)
        return result

    def certificate(self, index: int) -> Certificate:
        return Certificate.from_mapping(self.generator_cofactors(index))

    def certificate_of(self, rep: Cofactors) -> Certificate:
        return Certificate.from_mapping(self.substitute(rep))


class NCIdeal:
    """A two-sided ideal of a free algebra together with its (partial) Gröbner basis."""

    def __init__(
        self,
        gens: Sequence[Polynomial],
        order: MonomialOrder | Sequence[str] | Sequence[Sequence[str]] | None = None,
        algebra: FreeAlgebra | None = None,
    ) -> None:
        """Create the ideal generated by ``gens``.

        Args:
            gens: Generators; zero generators are allowed and ignored.
            order: A :class:`MonomialOrder` or an order spec; defaults to deglex in declaration order.
            algebra: Needed only when ``gens`` is empty.

        Raises:
            UsageError: If the generators live in different algebras or no algebra can be determined.
        """
        self.gens: tuple[Polynomial, ...] = tuple(gens)
        if algebra is None:
            if not self.gens:
                msg = "An ideal without generators needs an explicit algebra"
                raise UsageError(msg)
            algebra = self.gens[0].algebra
        for gen in self.gens:
            if gen.algebra != algebra:
                msg = "All generators must live in the same algebra"
                raise UsageError(msg)
        self.algebra = algebra
        if not isinstance(order, MonomialOrder):
            order = MonomialOrder.from_spec(algebra, order)
        self.order = order
        self._key: Callable[[str], SortKey] = order.key
        self._reset(None)

    def __repr__(self) -> str:
        gens = ", ".join(g.format(self.order) for g in self.gens)
        return f"Twosided Ideal ({gens}) of {self.algebra!r}"

    # ------------------------------------------------------------------ state

    def _reset(self, maxdeg: int | None) -> None:
        self._maxdeg = maxdeg
        self._trace = _Trace()
        self._elements = self._trace.elements
        self._pending: list[Ambiguity] = []
        self._iterations = 0
        for index, gen in enumerate(self.gens):
            if gen.is_zero():
                continue
            terms = gen.as_dict()
            lm = max(terms, key=self._key)
            lead = terms[lm]
            monic = {word: coeff / lead for word, coeff in terms.items()}
            self._adjoin(_Element(monic, lm, {("", index, ""): 1 / lead}, index))

    @property
    def iterations(self) -> int:
        """Number of completion iterations executed so far."""
        return self._iterations

    @property
    def is_complete(self) -> bool:
        """Whether no ambiguity is pending (a full Gröbner basis, up to ``maxdeg``)."""
        return not self._pending

    @property
    def pending(self) -> int:
        """Number of ambiguities still waiting to be processed."""
        return len(self._pending)

    @property
    def basis(self) -> list[TracedPolynomial]:
        """The current partial basis, including elements superseded by smaller leading monomials."""
        trace = self._trace
        return [
            TracedPolynomial(Polynomial(self.algebra, element.terms), resolve=lambda i=index: trace.certificate(i))
            for index, element in enumerate(self._elements)
        ]

    def leading_monomials(self, *, active_only: bool = False) -> list[Word]:
        """Leading words of the basis elements, in basis order."""
        return [e.lm for e in self._elements if e.active or not active_only]

    # --------------------------------------------------------------- adjoining

    def _adjoin(self, element: _Element) -> None:
        index = len(self._elements)
        self._elements.append(element)
        lm = element.lm
        for k, other in enumerate(self._elements[:index]):
            if other.active and other.lm in lm:
                amb = _inclusion(index, lm, k, other.lm)
                if amb is not None:
                    self._queue(amb)
                return
        deactivated = False
        for k, other in enumerate(self._elements[:index]):
            if other.active and lm in other.lm:
                other.active = False
                deactivated = True
                amb = _inclusion(k, other.lm, index, lm)
                if amb is not None:
                    self._queue(amb)
        element.active = True
        for amb in _overlaps(index, lm, index, lm):
            self._queue(amb)
        for k, other in enumerate(self._elements[:index]):
            if other.active:
                for amb in _overlaps(index, lm, k, other.lm):
                    self._queue(amb)
                for amb in _overlaps(k, other.lm, index, lm):
                    self._queue(amb)
        if deactivated:
            self._pending = [
                amb
                for amb in self._pending
                if amb.kind is AmbiguityKind.INCLUSION
                or (self._elements[amb.i].active and self._elements[amb.j].active)
            ]

    def _queue(self, amb: Ambiguity) -> None:
        if self._maxdeg is None or amb.degree <= self._maxdeg:
            self._pending.append(amb)

    # --------------------------------------------------------------- reduction

    def _divisor(self, word: str) -> tuple[int, int] | None:
        for index, element in enumerate(self._elements):
            position = word.find(element.lm)
            if position >= 0:
                return index, position
        return None

    def _reduce_terms(self, terms: Terms, quotients: Cofactors | None) -> Terms:
        """Fully reduce ``terms`` (consumed); returns the remainder and records quotients."""
        key = self._key
        remainder: Terms = {}
        while terms:
            word = max(terms, key=key)
            coeff = terms.pop(word)
            hit = self._divisor(word)
            if hit is None:
                remainder[word] = coeff
                continue
            index, position = hit
            element = self._elements[index]
            left = word[:position]
            right = word[position + len(element.lm) :]
            for gword, gcoeff in element.terms.items():
                if gword != element.lm:
                    _axpy(terms, left + gword + right, -coeff * gcoeff)
            if quotients is not None:
                _axpy(quotients, (left, index, right), coeff)
        return remainder

    def _s_polynomial(self, amb: Ambiguity) -> tuple[Terms, Cofactors]:
        terms: Terms = {}
        for word, coeff in self._elements[amb.i].terms.items():
            _axpy(terms, amb.l1 + word + amb.r1, coeff)
        for word, coeff in self._elements[amb.j].terms.items():
            _axpy(terms, amb.l2 + word + amb.r2, -coeff)
        rep: Cofactors = {}
        _axpy(rep, (amb.l1, amb.i, amb.r1), Fraction(1))
        _axpy(rep, (amb.l2, amb.j, amb.r2), Fraction(-1))
        return terms, rep

    # -------------------------------------------------------------- completion

    def _criterion_discards(self, amb: Ambiguity) -> bool:
        if amb.kind is AmbiguityKind.INCLUSION:
            return False
        multiple = amb.l1 + self._elements[amb.i].lm + amb.r1
        end = len(multiple) - 1
        return any(element.active and multiple.find(element.lm, 1, end) >= 0 for element in self._elements)

    def _iterate(self, *, criterion: bool) -> None:
        degree = min(amb.degree for amb in self._pending)
        batch = sorted(amb for amb in self._pending if amb.degree == degree)
        self._pending = [amb for amb in self._pending if amb.degree != degree]
        rows: list[tuple[Terms, Cofactors]] = []
        for amb in batch:
            if criterion and self._criterion_discards(amb):
                continue
            terms, rep = self._s_polynomial(amb)
            quotients: Cofactors = {}
            remainder = self._reduce_terms(terms, quotients)
            if remainder:
                for key, coeff in quotients.items():
                    _axpy(rep, key, -coeff)
                rows.append((remainder, rep))
        logger.debug(
            "Iteration %d: degree %d, %d ambiguities, %d nonzero remainders",
            self._iterations + 1,
            degree,
            len(batch),
            len(rows),
        )
        for terms, rep in self._echelon(rows):
            self._adjoin(_Element(terms, max(terms, key=self._key), rep, None))
        self._iterations += 1

    def _echelon(self, rows: list[tuple[Terms, Cofactors]]) -> list[tuple[Terms, Cofactors]]:
        """Fully reduced row echelon form over the rationals, monic, by descending leading monomial."""
        key = self._key
        pivots: list[tuple[str, Terms, Cofactors]] = []
        for row_terms, row_rep in rows:
            terms, rep = dict(row_terms), dict(row_rep)
            for pivot_word, pivot_terms, pivot_rep in pivots:
                coeff = terms.get(pivot_word)
                if coeff:
                    for word, value in pivot_terms.items():
                        _axpy(terms, word, -coeff * value)
                    for k, value in pivot_rep.items():
                        _axpy(rep, k, -coeff * value)
            if not terms:
                continue
            lm = max(terms, key=key)
            lead = terms[lm]
            terms = {word: value / lead for word, value in terms.items()}
            rep = {k: value / lead for k, value in rep.items()}
            for _, pivot_terms, pivot_rep in pivots:
                coeff = pivot_terms.get(lm)
                if coeff:
                    for word, value in terms.items():
                        _axpy(pivot_terms, word, -coeff * value)
                    for k, value in rep.items():
                        _axpy(pivot_rep, k, -coeff * value)
            pivots.append((lm, terms, rep))
        pivots.sort(key=lambda item: key(item[0]), reverse=True)
        return [(terms, rep) for _, terms, rep in pivots]

    def step(self, *, criterion: bool = True) -> bool:
        """Run one iteration if any ambiguity is pending; returns whether work was done."""
        if not self._pending:
            return False
        self._iterate(criterion=criterion)
        return True

    def groebner_basis(
        self,
        maxiter: int = 10,
        maxdeg: int | None = None,
        *,
        trace_cofactors: bool = True,
        criterion: bool = True,
        reset: bool = True,
        interreduce: bool = False,
        progress: Callable[[int], None] | None = None,
    ) -> list[TracedPolynomial]:
        """Run up to ``maxiter`` completion iterations and return the partial basis.

        One iteration takes every pending ambiguity of minimal degree, reduces
        their S-polynomials against the current basis and adjoins the nonzero
        remainders after mutual row reduction.

        Args:
            maxiter: Iterations to execute (further iterations when resuming with ``reset=False``).
            maxdeg: Ambiguities with a longer common multiple are never considered.
            trace_cofactors: When false, certificates of the result are empty.
            criterion: Discard overlaps whose common multiple has an active leading monomial strictly inside.
            reset: Start again from the generators instead of resuming.
            interreduce: Interreduce the basis before returning it.
            progress: Called with the 1-based number of each iteration as it starts.

        Returns:
            The (partial) Gröbner basis.
        """
        if reset or maxdeg != self._maxdeg:
            self._reset(maxdeg)
        for _ in range(maxiter):
            if not self._pending:
                break
            if progress is not None:
                progress(self._iterations + 1)
            self._iterate(criterion=criterion)
        basis = self.basis
        if not trace_cofactors:
            basis = [TracedPolynomial(t.poly, Certificate()) for t in basis]
        if interreduce:
            return interreduce_basis(basis, self.order)
        return basis

    def reduced_form(
        self, f: Polynomial, maxiter: int = 10, maxdeg: int | None = None, *, criterion: bool = True
    ) -> TracedPolynomial:
        """Normal form of ``f`` modulo the partial basis after ``maxiter`` iterations in total.

        Completion resumes from the current state, so repeated calls share work.

        Returns:
            The remainder ``g``; its certificate expands to ``f - g``.
        """
        self._check(f)
        if maxdeg != self._maxdeg:
            self._reset(maxdeg)
        while self._pending and self._iterations < maxiter:
            self._iterate(criterion=criterion)
        quotients: Cofactors = {}
        remainder = self._reduce_terms(f.as_dict(), quotients)
        trace = self._trace
        return TracedPolynomial(Polynomial(self.algebra, remainder), resolve=lambda: trace.certificate_of(quotients))

    def reduce(self, f: Polynomial) -> Polynomial:
        """Untraced normal form of ``f`` modulo the current partial basis."""
        self._check(f)
        return Polynomial(self.algebra, self._reduce_terms(f.as_dict(), None))

    def contains(self, f: Polynomial, maxiter: int = 10) -> bool:
        """Semi-decide membership: true only if ``f`` reduces to zero within ``maxiter`` iterations in total."""
        self._check(f)
        if not self.reduce(f):
            return True
        while self._pending and self._iterations < maxiter:
            self._iterate(criterion=True)
            if not self.reduce(f):
                return True
        return False

    def interreduce(self, basis: Sequence[TracedPolynomial] | None = None) -> list[TracedPolynomial]:
        """Interreduce ``basis`` (default: the current partial basis) under this ideal's order."""
        return interreduce_basis(self.basis if basis is None else basis, self.order)

    def _check(self, f: Polynomial) -> None:
        if f.algebra != self.algebra:
            msg = f"Polynomial {f} does not live in {self.algebra!r}"
            raise UsageError(msg)


def find_ambiguities(
    basis: Sequence[TracedPolynomial | Polynomial], order: MonomialOrder, maxdeg: int | None = None
) -> list[Ambiguity]:
    """All overlap and inclusion ambiguities among the leading monomials of ``basis``.

    Returns:
        Ambiguities whose common multiple has degree at most ``maxdeg``, sorted by degree then index pair.
    """
    polys = [item.poly if isinstance(item, TracedPolynomial) else item for item in basis]
    lms = [order.leading_term(p)[1] for p in polys]
    found: list[Ambiguity] = []
    for i, u in enumerate(lms):
        found.extend(_overlaps(i, u, i, u))
        for j, v in enumerate(lms):
            if i == j:
                continue
            found.extend(_overlaps(i, u, j, v))
            if v in u and (u != v or i > j):
                amb = _inclusion(i, u, j, v)
                if amb is not None:
                    found.append(amb)
    if maxdeg is not None:
        found = [amb for amb in found if amb.degree <= maxdeg]
    return sorted(found)


def _cofactors_of(cert: Certificate, factor: Fraction, left: str = "", right: str = "") -> Cofactors:
    result: Cofactors = {}
    for triple in cert:
        key = (left + triple.left_word, triple.gen_index, triple.right_word + right)
        _axpy(result, key, factor * triple.coefficient)
    return result


def s_polynomial(amb: Ambiguity, basis: Sequence[TracedPolynomial], order: MonomialOrder) -> TracedPolynomial:
    """``l1*g_i*r1 - l2*g_j*r2`` with leading coefficients normalised so the leading terms cancel."""
    first, second = basis[amb.i], basis[amb.j]
    c1 = order.leading_term(first.poly)[0]
    c2 = order.leading_term(second.poly)[0]
    poly = first.poly.multiply_words(amb.l1, amb.r1, 1 / c1) - second.poly.multiply_words(amb.l2, amb.r2, 1 / c2)
    cofactors = _cofactors_of(first.cert, 1 / c1, amb.l1, amb.r1)
    for key, value in _cofactors_of(second.cert, -1 / c2, amb.l2, amb.r2).items():
        _axpy(cofactors, key, value)
    return TracedPolynomial(poly, Certificate.from_mapping(cofactors))


def interreduce_basis(basis: Sequence[TracedPolynomial], order: MonomialOrder) -> list[TracedPolynomial]:
    """Mutually reduce until no monomial of any element is divisible by another element's leading monomial.

    Returns:
        Monic elements sorted ascending by leading monomial; certificates are kept up to date.
    """
    if not basis:
        return []
    algebra = basis[0].poly.algebra
    key = order.key
    items = [(t.poly.as_dict(), _cofactors_of(t.cert, Fraction(1))) for t in basis if t.poly]
    changed = True
    while changed:
        changed = False
        index = 0
        while index < len(items):
            others = [item for position, item in enumerate(items) if position != index]
            reduced, cofactors, touched = _reduce_against(items[index], others, key)
            if not reduced:
                del items[index]
                changed = True
                continue
            if touched:
                items[index] = (reduced, cofactors)
                changed = True
            index += 1
    result = []
    for terms, cofactors in items:
        lm = max(terms, key=key)
        lead = terms[lm]
        monic = Polynomial(algebra, {word: value / lead for word, value in terms.items()})
        cert = Certificate.from_mapping({k: value / lead for k, value in cofactors.items()})
        result.append((key(lm), TracedPolynomial(monic, cert)))
    result.sort(key=lambda item: item[0])
    return [traced for _, traced in result]


def _reduce_against(
    item: tuple[Terms, Cofactors],
    others: list[tuple[Terms, Cofactors]],
    key: Callable[[str], SortKey],
) -> tuple[Terms, Cofactors, bool]:
    leads = [(max(terms, key=key), terms, cofactors) for terms, cofactors in others]
    work = dict(item[0])
    cofactors = dict(item[1])
    remainder: Terms = {}
    touched = False
    while work:
        word = max(work, key=key)
        coeff = work.pop(word)
        for lm, other_terms, other_cofactors in leads:
            position = word.find(lm)
            if position < 0:
                continue
            touched = True
            left, right = word[:position], word[position + len(lm) :]
            factor = coeff / other_terms[lm]
            for other_word, value in other_terms.items():
                if other_word != lm:
                    _axpy(work, left + other_word + right, -factor * value)
            for (l2, gen, r2), value in other_cofactors.items():
                _axpy(cofactors, (left + l2, gen, r2 + right), -factor * value)
            break
        else:
            remainder[word] = coeff
    return remainder, cofactors, touched
