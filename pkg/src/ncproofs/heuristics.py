"""Searches for ideal elements of prescribed shape.

Every heuristic may miss answers, but nothing is returned unless a certificate
in terms of the ideal's generators has been found and expanded successfully.
"""

from __future__ import annotations

import enum
import itertools
import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from src.ncproofs.certificate import Certificate, expand_cofactors
from src.ncproofs.errors import UsageError
from src.ncproofs.freealg import Polynomial
from src.ncproofs.gb import NCIdeal, TracedPolynomial, interreduce_basis
from src.ncproofs.order import MonomialOrder

if TYPE_CHECKING:
    from src.ncproofs.freealg import Word
    from src.ncproofs.quiver import Quiver

logger = logging.getLogger(__name__)

DEFAULT_DEGBOUND = 5
DEFAULT_MAXITER = 10


class Heuristic(enum.StrEnum):
    """Search strategies of :func:`find_equivalent_expression`."""

    NAIVE = "naive"
    GROEBNER = "groebner"
    SUBALGEBRA = "subalgebra"
    RIGHT_IDEAL = "right-ideal"
    LEFT_IDEAL = "left-ideal"


class CancellationHeuristic(enum.StrEnum):
    """Search strategies of the cancellability rewrites."""

    SUBALGEBRA = "subalgebra"
    ONE_SIDED = "one-sided"
    TWO_SIDED = "two-sided"


def _word_of(term: Polynomial | None, role: str) -> Word:
    if term is None:
        return ""
    if not term.is_monomial():
        msg = f"The {role} must be a single monomial, got {term}"
        raise UsageError(msg)
    return next(word for word, _ in term.items())


@dataclass(frozen=True)
class SearchSpec:
    """Parameters of one search for elements ``±(target - g)``.

    Attributes:
        target: The polynomial ``f``.
        heuristic: Strategy; ``right-ideal`` needs a prefix and ``left-ideal`` a suffix.
        prefix: Every monomial of ``g`` starts with this monomial.
        suffix: Every monomial of ``g`` ends with this monomial.
        degbound: Largest degree of a monomial of ``g`` tried by the enumerating heuristics.
        order: Monomial order for the completion; the ideal's own order by default.
        maxiter: Completion iterations before candidates are tested.
        quiver: When given, only quiver-compatible results are kept.
        max_results: Naive search stops after this many hits, the first one by default; ``None`` collects the
            full set, ascending by degree.
    """

    target: Polynomial
    heuristic: Heuristic = Heuristic.GROEBNER
    prefix: Polynomial | None = None
    suffix: Polynomial | None = None
    degbound: int = DEFAULT_DEGBOUND
    order: MonomialOrder | Sequence[str] | Sequence[Sequence[str]] | None = None
    maxiter: int = DEFAULT_MAXITER
    quiver: Quiver | None = None
    max_results: int | None = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "heuristic", Heuristic(self.heuristic))
        if self.heuristic is Heuristic.RIGHT_IDEAL and self.prefix is None:
            msg = "The right-ideal heuristic requires a prefix"
            raise UsageError(msg)
        if self.heuristic is Heuristic.LEFT_IDEAL and self.suffix is None:
            msg = "The left-ideal heuristic requires a suffix"
            raise UsageError(msg)
        if self.degbound < 0:
            msg = f"degbound must be non-negative, got {self.degbound}"
            raise UsageError(msg)
        _word_of(self.prefix, "prefix")
        _word_of(self.suffix, "suffix")

    @property
    def prefix_word(self) -> Word:
        """The prefix as a word (empty when absent)."""
        return _word_of(self.prefix, "prefix")

    @property
    def suffix_word(self) -> Word:
        """The suffix as a word (empty when absent)."""
        return _word_of(self.suffix, "suffix")


def _scaled(cert: Certificate, factor: Fraction) -> Certificate:
    return Certificate(tuple(t._replace(left_coeff=t.left_coeff * factor) for t in cert.triples))


def _normalised(traced: TracedPolynomial, order: MonomialOrder) -> TracedPolynomial:
    lead = order.leading_term(traced.poly)[0]
    if lead == 1:
        return traced
    return TracedPolynomial(traced.poly.scale(1 / lead), _scaled(traced.cert, 1 / lead))


def _resolve_order(ideal: NCIdeal, spec: SearchSpec) -> MonomialOrder:
    if spec.order is None:
        return ideal.order
    if isinstance(spec.order, MonomialOrder):
        return spec.order
    return MonomialOrder.from_spec(ideal.algebra, spec.order)


def _completed(ideal: NCIdeal, order: MonomialOrder | None, maxiter: int) -> NCIdeal:
    work = NCIdeal(ideal.gens, order or ideal.order, ideal.algebra)
    work.groebner_basis(maxiter)
    return work


def _member(work: NCIdeal, f: Polynomial) -> TracedPolynomial | None:
    if work.reduce(f):
        return None
    return work.reduced_form(f, maxiter=work.iterations)


def _words(work: NCIdeal, degree: int) -> list[Word]:
    letters = [work.algebra.letter(name) for name in work.algebra.names]
    return sorted(("".join(w) for w in itertools.product(letters, repeat=degree)), key=work.order.key, reverse=True)


def _candidate_words(work: NCIdeal, spec: SearchSpec) -> Iterator[tuple[int, Word]]:
    """Monomials ``prefix*h*suffix`` by ascending degree, larger monomials first inside a degree."""
    prefix, suffix = spec.prefix_word, spec.suffix_word
    fixed = len(prefix) + len(suffix)
    for degree in range(fixed, spec.degbound + 1):
        for middle in _words(work, degree - fixed):
            yield degree, prefix + middle + suffix


def _compatible(spec: SearchSpec, poly: Polynomial) -> bool:
    return spec.quiver is None or spec.quiver.is_compatible(poly)


def _naive(work: NCIdeal, spec: SearchSpec, *, minimal_degree_only: bool) -> list[TracedPolynomial]:
    f = spec.target
    algebra = f.algebra
    found: list[TracedPolynomial] = []
    hit_degree: int | None = None
    for degree, word in _candidate_words(work, spec):
        if hit_degree is not None and degree > hit_degree and minimal_degree_only:
            break
        candidate = f - algebra.monomial(word)
        if not candidate or not _compatible(spec, candidate):
            continue
        traced = _member(work, candidate)
        if traced is None:
            continue
        found.append(traced)
        hit_degree = degree
        if spec.max_results is not None and len(found) >= spec.max_results:
            break
    return found


def _has_shape(g: Polynomial, prefix: Word, suffix: Word) -> bool:
    return all(word.startswith(prefix) and word.endswith(suffix) for word, _ in g.items())


def _split_target(element: Polynomial, f: Polynomial) -> Polynomial | None:
    """If ``element == c*(f - g)`` with ``g`` sharing no monomial with ``f``, return ``g``."""
    ratio: Fraction | None = None
    for word, coeff in f.items():
        value = element.coefficient(word)
        if not value:
            return None
        current = value / coeff
        if ratio is None:
            ratio = current
        elif current != ratio:
            return None
    if ratio is None:
        return None
    return f - element.scale(1 / ratio)


def _scan(
    basis: Sequence[TracedPolynomial], spec: SearchSpec, forbidden: set[str] | None = None
) -> list[TracedPolynomial]:
    f = spec.target
    prefix, suffix = spec.prefix_word, spec.suffix_word
    found = []
    for traced in basis:
        g = _split_target(traced.poly, f)
        if g is None or not _has_shape(g, prefix, suffix):
            continue
        if forbidden and g.variables() & forbidden:
            continue
        if _compatible(spec, traced.poly):
            found.append(traced)
    return found


def _subalgebra_order(ideal: NCIdeal, f: Polynomial) -> MonomialOrder:
    top = f.variables()
    ranking = [name for block in ideal.order.blocks for name in block]
    bottom = [name for name in ranking if name not in top]
    if not bottom or not top:
        return ideal.order
    return MonomialOrder(ideal.algebra, [bottom, [name for name in ranking if name in top]])


def _verified(
    results: Sequence[TracedPolynomial], gens: Sequence[Polynomial], order: MonomialOrder
) -> list[Polynomial]:
    polys: list[Polynomial] = []
    for traced in results:
        if expand_cofactors(traced.cert, gens, traced.poly.algebra) != traced.poly:
            logger.warning("Discarding candidate %s: its certificate does not expand to it", traced.poly)
            continue
        poly = _normalised(traced, order).poly
        if poly not in polys:
            polys.append(poly)
    return polys


def search(ideal: NCIdeal, spec: SearchSpec) -> list[TracedPolynomial]:
    """Run the heuristic of ``spec``; the results carry certificates but are not re-verified."""
    f = spec.target
    if f.algebra != ideal.algebra:
        msg = f"Target {f} does not live in {ideal.algebra!r}"
        raise UsageError(msg)
    if not f:
        return []
    order = _resolve_order(ideal, spec) if spec.order is not None else None
    heuristic = spec.heuristic
    logger.debug("Searching for elements %s - g with heuristic %s", f, heuristic)
    if heuristic is Heuristic.NAIVE:
        return _naive(_completed(ideal, order, spec.maxiter), spec, minimal_degree_only=False)
    if heuristic in (Heuristic.RIGHT_IDEAL, Heuristic.LEFT_IDEAL):
        exhaustive = SearchSpec(
            f, Heuristic.NAIVE, spec.prefix, spec.suffix, spec.degbound, None, spec.maxiter, spec.quiver, None
        )
        return _naive(_completed(ideal, order, spec.maxiter), exhaustive, minimal_degree_only=True)
    if heuristic is Heuristic.SUBALGEBRA:
        work = _completed(ideal, order or _subalgebra_order(ideal, f), spec.maxiter)
        basis = interreduce_basis(work.basis, work.order)
        return _scan(basis, spec, forbidden=f.variables())
    work = _completed(ideal, order, spec.maxiter)
    return _scan(interreduce_basis(work.basis, work.order), spec)


def find_equivalent_expression(ideal: NCIdeal, spec: SearchSpec) -> list[Polynomial]:
    """Ideal members of the form ``±(target - g)``, each with a verified certificate.

    Heuristics:
        naive: try monomials ``m`` of degree at most ``degbound`` and keep ``target - m`` when it reduces to zero.
        groebner: scan the interreduced partial basis for elements containing the target.
        subalgebra: like groebner under an elimination order with the target's variables on top, keeping only
            elements whose ``g`` avoids those variables.
        right-ideal / left-ideal: all ``target - prefix*h`` (``target - h*suffix``) members of minimal degree.

    Returns:
        Monic polynomials in the order the heuristic found them.

    Raises:
        UsageError: If the target lives in another algebra.
    """
    results = search(ideal, spec)
    polys = _verified(results, ideal.gens, _resolve_order(ideal, spec))
    logger.info("Found %d candidate(s) for %s", len(polys), spec.target)
    return polys


def _strip(poly: Polynomial, length: int, *, left: bool) -> Polynomial:
    if left:
        return Polynomial(poly.algebra, {word[length:]: coeff for word, coeff in poly.items()})
    return Polynomial(poly.algebra, {word[: len(word) - length]: coeff for word, coeff in poly.items()})


def _cancel(
    ideal: NCIdeal,
    a: Polynomial,
    b: Polynomial,
    heuristic: CancellationHeuristic | str,
    maxiter: int,
    degbound: int,
    *,
    left: bool,
) -> list[Polynomial]:
    heuristic = CancellationHeuristic(heuristic)
    a_word, b_word = _word_of(a, "cancelled factor"), _word_of(b, "kept factor")
    product = ideal.algebra.monomial(a_word + b_word if left else b_word + a_word)
    if all(not g for g in ideal.gens):
        return []
    spec = SearchSpec(
        product,
        Heuristic.NAIVE,
        prefix=product if left else None,
        suffix=None if left else product,
        degbound=max(degbound, product.degree() + 2),
        maxiter=maxiter,
        max_results=None,
    )
    work = _completed(ideal, None, maxiter)
    # one-sided keeps the hits of minimal degree, two-sided every hit up to degbound
    members = _naive(work, spec, minimal_degree_only=heuristic is not CancellationHeuristic.TWO_SIDED)
    candidates = [_strip(poly, len(a_word), left=left) for poly in _verified(members, ideal.gens, work.order)]
    if heuristic is CancellationHeuristic.SUBALGEBRA:
        candidates.extend(
            _strip(traced.poly, len(a_word), left=left)
            for traced in interreduce_basis(work.basis, work.order)
            if _has_shape(traced.poly, product.leading_word() if left else "", "" if left else product.leading_word())
        )
    results: list[Polynomial] = []
    for candidate in candidates:
        if not candidate:
            continue
        g = candidate.monic(work.order)
        if g in results:
            continue
        full = a * g if left else g * a
        if _member(work, full) is None:
            logger.warning("Discarding %s: %s does not reduce to zero", g, full)
            continue
        results.append(g)
    return results


def apply_left_cancellability(
    ideal: NCIdeal,
    a: Polynomial,
    b: Polynomial,
    heuristic: CancellationHeuristic | str = CancellationHeuristic.SUBALGEBRA,
    maxiter: int = DEFAULT_MAXITER,
    degbound: int = DEFAULT_DEGBOUND,
) -> list[Polynomial]:
    """Find ideal elements ``a*b*f`` and return the polynomials ``b*f``.

    Every result ``g`` satisfies ``a*g`` reducing to zero modulo the partial basis.
    """
    return _cancel(ideal, a, b, heuristic, maxiter, degbound, left=True)


def apply_right_cancellability(
    ideal: NCIdeal,
    a: Polynomial,
    b: Polynomial,
    heuristic: CancellationHeuristic | str = CancellationHeuristic.SUBALGEBRA,
    maxiter: int = DEFAULT_MAXITER,
    degbound: int = DEFAULT_DEGBOUND,
) -> list[Polynomial]:
    """Find ideal elements ``f*a*b`` and return the polynomials ``f*a``.

    Every result ``g`` satisfies ``g*b`` reducing to zero modulo the partial basis.
    """
    return _cancel(ideal, b, a, heuristic, maxiter, degbound, left=False)


def find_range_factorisation(
    ideal: NCIdeal,
    f: Polynomial,
    through: Polynomial,
    side: str = "prefix",
    heuristic: Heuristic | str = Heuristic.NAIVE,
    degbound: int = DEFAULT_DEGBOUND,
    maxiter: int = DEFAULT_MAXITER,
) -> list[Polynomial]:
    """Factor ``f`` through ``through``: ``f = through*h`` (range) or ``f = h*through`` (kernel).

    Raises:
        UsageError: If ``side`` is neither ``prefix`` nor ``suffix``.
    """
    if side not in ("prefix", "suffix"):
        msg = f"side must be 'prefix' or 'suffix', got {side!r}"
        raise UsageError(msg)
    spec = SearchSpec(
        f,
        Heuristic(heuristic),
        prefix=through if side == "prefix" else None,
        suffix=through if side == "suffix" else None,
        degbound=degbound,
        maxiter=maxiter,
    )
    return find_equivalent_expression(ideal, spec)
