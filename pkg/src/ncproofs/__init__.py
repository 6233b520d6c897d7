"""ncproofs - noncommutative Gröbner bases with cofactor certificates for operator identities."""

from src.ncproofs.certificate import Certificate, Triple, expand_cofactors
from src.ncproofs.certify import CertifyReport, ProofStatus, certify, pretty_print_proof, verify_certificate
from src.ncproofs.config import __version__
from src.ncproofs.freealg import (
    AdjointMap,
    ConjugationMap,
    FreeAlgebra,
    Polynomial,
    add_adj,
    add_tr_c,
    adjoint,
    identity_relations,
    parse,
    pinv,
)
from src.ncproofs.gb import NCIdeal, TracedPolynomial
from src.ncproofs.heuristics import (
    CancellationHeuristic,
    Heuristic,
    SearchSpec,
    apply_left_cancellability,
    apply_right_cancellability,
    find_equivalent_expression,
    find_range_factorisation,
)
from src.ncproofs.order import MonomialOrder
from src.ncproofs.quiver import Quiver

__all__ = [
    "AdjointMap",
    "CancellationHeuristic",
    "Certificate",
    "CertifyReport",
    "ConjugationMap",
    "FreeAlgebra",
    "Heuristic",
    "MonomialOrder",
    "NCIdeal",
    "Polynomial",
    "ProofStatus",
    "Quiver",
    "SearchSpec",
    "TracedPolynomial",
    "Triple",
    "__version__",
    "add_adj",
    "add_tr_c",
    "adjoint",
    "apply_left_cancellability",
    "apply_right_cancellability",
    "certify",
    "expand_cofactors",
    "find_equivalent_expression",
    "find_range_factorisation",
    "identity_relations",
    "parse",
    "pinv",
    "pretty_print_proof",
    "verify_certificate",
]
