"""Proof driver: certify ideal membership of claims and render the certificates."""

from __future__ import annotations

import enum
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

from src.ncproofs.certificate import Certificate, Triple, expand_cofactors
from src.ncproofs.errors import UsageError
from src.ncproofs.freealg import FreeAlgebra, Polynomial
from src.ncproofs.gb import NCIdeal
from src.ncproofs.order import MonomialOrder
from src.ncproofs.quiver import Quiver

__all__ = [
    "CertifyReport",
    "ProofStatus",
    "certify",
    "expand_cofactors",
    "pretty_print_proof",
    "verify_certificate",
]

logger = logging.getLogger(__name__)

PROGRESS_INTERVAL = 5


class ProofStatus(enum.StrEnum):
    """Outcome of a certification attempt; ``failed`` never means disproved."""

    PROVED = "proved"
    FAILED = "failed"


@dataclass(frozen=True)
class CertifyReport:
    """Result of :func:`certify`, one entry per claim."""

    status: ProofStatus
    claims: tuple[Polynomial, ...]
    assumptions: tuple[Polynomial, ...]
    proofs: tuple[Certificate | None, ...]
    integer_clean: tuple[bool, ...]
    iterations_used: int
    order: MonomialOrder | None = field(default=None, compare=False)

    @property
    def proved(self) -> bool:
        """Whether every claim has a certificate."""
        return self.status is ProofStatus.PROVED

    def __len__(self) -> int:
        return len(self.proofs)

    def __getitem__(self, index: int) -> Certificate | None:
        return self.proofs[index]

    def pretty(self) -> str:
        """All available proofs, one per line; unproved claims are marked as such."""
        lines = []
        for claim, proof in zip(self.claims, self.proofs, strict=True):
            if proof is None:
                lines.append(f"{claim.format()}: no certificate found")
            else:
                lines.append(pretty_print_proof(proof, self.assumptions))
        return "\n".join(lines)


def _as_claims(claims: Polynomial | Sequence[Polynomial]) -> tuple[Polynomial, ...]:
    if isinstance(claims, Polynomial):
        return (claims,)
    return tuple(claims)


def _common_algebra(assumptions: Sequence[Polynomial], claims: Sequence[Polynomial]) -> FreeAlgebra:
    polys = [*assumptions, *claims]
    if not polys:
        msg = "Nothing to certify: no assumptions and no claims"
        raise UsageError(msg)
    algebra = polys[0].algebra
    for poly in polys:
        if poly.algebra != algebra:
            msg = f"Polynomial {poly} does not live in {algebra!r}"
            raise UsageError(msg)
    return algebra


def _by_generator(cert: Certificate) -> Certificate:
    return Certificate(tuple(sorted(cert.triples, key=lambda t: t.gen_index)))


def certify(
    assumptions: Sequence[Polynomial],
    claims: Polynomial | Sequence[Polynomial],
    maxiter: int = 10,
    quiver: Quiver | None = None,
    order: MonomialOrder | Sequence[str] | Sequence[Sequence[str]] | None = None,
    progress_interval: int = PROGRESS_INTERVAL,
) -> CertifyReport:
    """Certify that every claim lies in the two-sided ideal generated by ``assumptions``.

    The claims are reduced before the first completion iteration and again after
    each one, so easy claims cost no completion work at all.

    Args:
        assumptions: Generators of the ideal.
        claims: One polynomial or a list of them.
        maxiter: Maximal number of completion iterations.
        quiver: When given, every assumption and claim must be compatible with it.
        order: Monomial order or order spec; deglex in declaration order by default.
        progress_interval: Log "Starting iteration N..." every this many iterations.

    Returns:
        A report with one certificate per proved claim.

    Raises:
        QuiverError: If some polynomial is not compatible with ``quiver``.
        UsageError: If the polynomials live in different algebras.
    """
    claim_list = _as_claims(claims)
    assumption_list = tuple(assumptions)
    algebra = _common_algebra(assumption_list, claim_list)
    if quiver is not None:
        for assumption in assumption_list:
            quiver.check(assumption, "assumption")
        for claim in claim_list:
            quiver.check(claim, "claim")

    ideal = NCIdeal(assumption_list, order, algebra)
    logger.info("Computing a (partial) Groebner basis and reducing the claims...")
    proofs: list[Certificate | None] = [None] * len(claim_list)
    while True:
        for index, claim in enumerate(claim_list):
            if proofs[index] is None and not ideal.reduce(claim):
                traced = ideal.reduced_form(claim, maxiter=ideal.iterations)
                proofs[index] = _by_generator(traced.cert)
        if all(proof is not None for proof in proofs):
            break
        if ideal.iterations >= maxiter or ideal.is_complete:
            break
        number = ideal.iterations + 1
        if progress_interval > 0 and number % progress_interval == 0:
            logger.info("Starting iteration %d...", number)
        ideal.step()

    integer_clean = tuple(proof is not None and proof.is_integral() for proof in proofs)
    proved = all(proof is not None for proof in proofs)
    if proved:
        logger.info("Done! Ideal membership of all claims could be verified!")
        for index, clean in enumerate(integer_clean):
            if not clean:
                logger.warning(
                    "Warning: the cofactor representation of claim %d contains non-integer coefficients; "
                    "the proof is valid over the rationals only",
                    index,
                )
    else:
        logger.info("Failed! Not all ideal memberships could be verified.")
    return CertifyReport(
        status=ProofStatus.PROVED if proved else ProofStatus.FAILED,
        claims=claim_list,
        assumptions=assumption_list,
        proofs=tuple(proofs),
        integer_clean=integer_clean,
        iterations_used=ideal.iterations,
        order=ideal.order,
    )


def verify_certificate(cert: Certificate, assumptions: Sequence[Polynomial], claim: Polynomial) -> bool:
    """Whether ``cert`` expands exactly to ``claim``, with plain arithmetic only."""
    return expand_cofactors(cert, assumptions, claim.algebra) == claim


def _render_triple(triple: Triple, assumption: Polynomial) -> tuple[bool, str]:
    algebra = assumption.algebra
    coeff = triple.coefficient
    pieces = []
    if abs(coeff) != 1:
        pieces.append(str(abs(coeff)))
    if triple.left_word:
        pieces.append(algebra.format_word(triple.left_word))
    pieces.append(f"({assumption.format()})")
    if triple.right_word:
        pieces.append(algebra.format_word(triple.right_word))
    return coeff < 0, "*".join(pieces)


def pretty_print_proof(cert: Certificate, assumptions: Sequence[Polynomial]) -> str:
    """Render ``<expanded> = <sum of bracketed assumption instances>``.

    Example:
        ``-d + a*b*c = (-d + a*b)*c + d*(-1 + c)``

    Raises:
        UsageError: If a generator index is out of range.
    """
    expanded = expand_cofactors(cert, assumptions)
    if not cert.triples:
        return f"{expanded.format()} = 0"
    summands = []
    for position, triple in enumerate(cert.triples):
        negative, body = _render_triple(triple, assumptions[triple.gen_index])
        if position == 0:
            summands.append(f"-{body}" if negative else body)
        else:
            summands.append(f" - {body}" if negative else f" + {body}")
    return f"{expanded.format()} = {''.join(summands)}"
