"""Tests for completion, reduction and interreduction in the free algebra."""

import random

import pytest

from src.ncproofs.certificate import expand_cofactors
from src.ncproofs.errors import UsageError
from src.ncproofs.freealg import FreeAlgebra, Polynomial
from src.ncproofs.gb import (
    AmbiguityKind,
    NCIdeal,
    TracedPolynomial,
    find_ambiguities,
    interreduce_basis,
    s_polynomial,
)
from src.ncproofs.order import MonomialOrder
from tests.conftest import random_binomial, random_polynomial

XY_BASIS = [
    "-x*y + x*y*x",
    "-y + y*x^2*y",
    "-y + y*x",
    "-x*y + x*y^2",
    "-x*y + x*y^2*x",
    "-y + y^2",
    "-y + y^3",
]


class TestNCIdeal:
    """Tests for ideal construction."""

    @pytest.mark.unit
    def test_generators_are_made_monic(self, abcd: FreeAlgebra) -> None:
        """Test that the initial basis consists of the monic generators."""
        ideal = NCIdeal([abcd.parse("2*a*b - 4*d")])
        assert [t.poly for t in ideal.basis] == [abcd.parse("a*b - 2*d")]
        assert ideal.iterations == 0

    @pytest.mark.unit
    def test_zero_generators_ignored(self, abcd: FreeAlgebra) -> None:
        """Test that zero generators do not enter the basis."""
        ideal = NCIdeal([abcd.zero(), abcd.parse("a - b")])
        assert len(ideal.basis) == 1
        assert ideal.basis[0].cert.triples[0].gen_index == 1

    @pytest.mark.unit
    def test_empty_ideal_needs_algebra(self, abcd: FreeAlgebra) -> None:
        """Test that an ideal without generators needs an explicit algebra."""
        with pytest.raises(UsageError, match="explicit algebra"):
            NCIdeal([])
        ideal = NCIdeal([], algebra=abcd)
        assert ideal.is_complete
        assert ideal.reduce(abcd.parse("a")) == abcd.parse("a")

    @pytest.mark.unit
    def test_mixed_algebras_rejected(self, abcd: FreeAlgebra, xy: FreeAlgebra) -> None:
        """Test that all generators must share one algebra."""
        with pytest.raises(UsageError, match="same algebra"):
            NCIdeal([abcd.parse("a"), xy.parse("x")])

    @pytest.mark.unit
    def test_order_spec(self, xy: FreeAlgebra) -> None:
        """Test that an order may be given as a list of names."""
        ideal = NCIdeal([xy.parse("x - y")], ["y", "x"])
        assert ideal.order == MonomialOrder.deglex(xy, ["y", "x"])
        assert ideal.reduce(xy.parse("x")) == xy.parse("y")

    @pytest.mark.unit
    def test_reduce_checks_algebra(self, xy_ideal: NCIdeal, abcd: FreeAlgebra) -> None:
        """Test that foreign polynomials are rejected."""
        with pytest.raises(UsageError, match="does not live"):
            xy_ideal.reduced_form(abcd.parse("a"))


class TestGroebnerBasis:
    """Tests for bounded completion on the x, y example."""

    @pytest.mark.unit
    def test_partial_basis(self, xy: FreeAlgebra, xy_ideal: NCIdeal) -> None:
        """Test the seven-element basis of <x*y*x - x*y, y*x^2*y - y>."""
        basis = xy_ideal.groebner_basis()
        assert {t.poly for t in basis} == {xy.parse(text) for text in XY_BASIS}
        assert xy_ideal.is_complete

    @pytest.mark.unit
    def test_interreduced_basis(self, xy: FreeAlgebra, xy_ideal: NCIdeal) -> None:
        """Test that interreduction leaves y*x - y and y^2 - y."""
        basis = xy_ideal.groebner_basis(interreduce=True)
        assert [t.poly for t in basis] == [xy.parse("-y + y*x"), xy.parse("-y + y^2")]
        assert [t.poly for t in xy_ideal.interreduce()] == [t.poly for t in basis]

    @pytest.mark.unit
    def test_basis_certificates_expand(self, xy_ideal: NCIdeal) -> None:
        """Test that every basis element carries a correct certificate."""
        for traced in xy_ideal.groebner_basis():
            assert expand_cofactors(traced.cert, xy_ideal.gens) == traced.poly

    @pytest.mark.unit
    def test_maxiter_zero(self, xy: FreeAlgebra, xy_ideal: NCIdeal) -> None:
        """Test that no iterations leave only the generators."""
        basis = xy_ideal.groebner_basis(maxiter=0)
        assert [t.poly for t in basis] == [xy.parse("x*y*x - x*y"), xy.parse("y*x^2*y - y")]
        assert xy_ideal.iterations == 0

    @pytest.mark.unit
    def test_maxdeg_limits_ambiguities(self, xy_ideal: NCIdeal) -> None:
        """Test that a degree bound below every ambiguity makes the basis complete at once."""
        basis = xy_ideal.groebner_basis(maxdeg=3)
        assert len(basis) == 2
        assert xy_ideal.is_complete

    @pytest.mark.unit
    def test_progress_callback(self, xy_ideal: NCIdeal) -> None:
        """Test that progress is reported with 1-based iteration numbers."""
        seen: list[int] = []
        xy_ideal.groebner_basis(maxiter=2, progress=seen.append)
        assert seen == [1, 2][: xy_ideal.iterations]

    @pytest.mark.unit
    def test_untraced_basis(self, xy_ideal: NCIdeal) -> None:
        """Test that tracing can be switched off."""
        basis = xy_ideal.groebner_basis(trace_cofactors=False)
        assert all(len(t.cert) == 0 for t in basis)

    @pytest.mark.unit
    def test_step(self, xy_ideal: NCIdeal) -> None:
        """Test that step runs single iterations until nothing is pending."""
        steps = 0
        while xy_ideal.step():
            steps += 1
        assert steps == xy_ideal.iterations
        assert not xy_ideal.step()


class TestReduction:
    """Tests for normal forms."""

    @pytest.mark.unit
    def test_reduced_form_zero(self, xy: FreeAlgebra, xy_ideal: NCIdeal) -> None:
        """Test that y^2 - y reduces to zero with a certificate."""
        claim = xy.parse("y^2 - y")
        traced = xy_ideal.reduced_form(claim)
        assert traced.poly.is_zero()
        assert expand_cofactors(traced.cert, xy_ideal.gens) == claim

    @pytest.mark.unit
    def test_reduced_form_nonzero(self, xy: FreeAlgebra, xy_ideal: NCIdeal) -> None:
        """Test that y^2 reduces to y and the certificate covers the difference."""
        traced = xy_ideal.reduced_form(xy.parse("y^2"))
        assert traced.poly == xy.parse("y")
        assert expand_cofactors(traced.cert, xy_ideal.gens) == xy.parse("y^2 - y")

    @pytest.mark.unit
    def test_contains(self, xy: FreeAlgebra, xy_ideal: NCIdeal) -> None:
        """Test the membership semi-decision."""
        assert xy_ideal.contains(xy.parse("y^3 - y"))
        assert not xy_ideal.contains(xy.parse("x"))

    @pytest.mark.unit
    def test_reduce_is_untraced(self, xy: FreeAlgebra, xy_ideal: NCIdeal) -> None:
        """Test the untraced normal form against the current partial basis."""
        assert xy_ideal.reduce(xy.parse("x*y*x")) == xy.parse("x*y")

    @pytest.mark.unit
    def test_repr(self, xy_ideal: NCIdeal) -> None:
        """Test the printed form of an ideal."""
        assert repr(xy_ideal).startswith("Twosided Ideal (-x*y + x*y*x, -y + y*x^2*y)")
        assert str(TracedPolynomial(xy_ideal.gens[0])) == "-x*y + x*y*x"


class TestAmbiguities:
    """Tests for overlap and inclusion detection."""

    @pytest.mark.unit
    def test_self_overlap(self, xy: FreeAlgebra) -> None:
        """Test that x*y*x overlaps itself in x."""
        order = MonomialOrder(xy)
        found = find_ambiguities([xy.parse("x*y*x - x*y")], order)
        assert len(found) == 1
        assert found[0].kind is AmbiguityKind.OVERLAP
        assert found[0].degree == 5

    @pytest.mark.unit
    def test_inclusion(self, xy: FreeAlgebra) -> None:
        """Test that a leading monomial inside another gives an inclusion."""
        order = MonomialOrder(xy)
        found = find_ambiguities([xy.parse("x*y*y"), xy.parse("y*y - x")], order)
        kinds = {amb.kind for amb in found}
        assert AmbiguityKind.INCLUSION in kinds
        assert all(amb.degree <= 3 for amb in find_ambiguities([xy.parse("x*y*y"), xy.parse("y*y")], order, 3))

    @pytest.mark.unit
    def test_s_polynomial_certificate(self, xy: FreeAlgebra) -> None:
        """Test that an S-polynomial expands to itself."""
        order = MonomialOrder(xy)
        gens = [xy.parse("x*y*x - x*y")]
        traced = [NCIdeal(gens).basis[0]]
        amb = find_ambiguities(traced, order)[0]
        s = s_polynomial(amb, traced, order)
        assert s.poly == xy.parse("x*y*x*y - x*y*y*x")
        assert expand_cofactors(s.cert, gens) == s.poly

    @pytest.mark.unit
    def test_interreduce_empty(self, xy: FreeAlgebra) -> None:
        """Test interreducing nothing."""
        assert interreduce_basis([], MonomialOrder(xy)) == []


class TestRandomIdeals:
    """Property tests on seeded random binomial ideals."""

    @pytest.mark.unit
    def test_certificates_expand_to_claims(self, rng: random.Random) -> None:
        """Test certificates, generator reduction and idempotent normal forms on 200 random ideals."""
        for _ in range(200):
            algebra = FreeAlgebra(["a", "b", "c", "d"][: rng.randint(2, 4)])
            gens = [random_binomial(rng, algebra) for _ in range(rng.randint(1, 4))]
            ideal = NCIdeal(gens)
            basis = ideal.groebner_basis(maxiter=2, maxdeg=6)
            for traced in basis:
                assert expand_cofactors(traced.cert, gens) == traced.poly
            for gen in gens:
                assert ideal.reduce(gen).is_zero()
            f = random_polynomial(rng, algebra)
            remainder = ideal.reduced_form(f, maxiter=2, maxdeg=6)
            assert expand_cofactors(remainder.cert, gens, algebra) == f - remainder.poly
            assert ideal.reduced_form(remainder.poly, maxiter=2, maxdeg=6).poly == remainder.poly

    @pytest.mark.unit
    def test_binomial_certificates_are_integral(self, rng: random.Random) -> None:
        """Test that binomial generators give integer cofactors."""
        for _ in range(50):
            algebra = FreeAlgebra(["a", "b", "c"])
            gens = [random_binomial(rng, algebra, 3) for _ in range(3)]
            ideal = NCIdeal(gens)
            for traced in ideal.groebner_basis(maxiter=2, maxdeg=6):
                assert traced.cert.is_integral()
                assert isinstance(traced.poly, Polynomial)

    @pytest.mark.unit
    def test_criterion_keeps_the_ideal(self, rng: random.Random) -> None:
        """Test that bases computed with and without the overlap criterion reduce each other to zero."""
        compared = 0
        for _ in range(200):
            algebra = FreeAlgebra(["a", "b", "c"][: rng.randint(2, 3)])
            gens = [random_binomial(rng, algebra, 3) for _ in range(rng.randint(1, 3))]
            pruned, full = NCIdeal(gens), NCIdeal(gens)
            pruned_basis = pruned.groebner_basis(maxiter=20, maxdeg=5, criterion=True)
            full_basis = full.groebner_basis(maxiter=20, maxdeg=5, criterion=False)
            if not (pruned.is_complete and full.is_complete):
                continue
            compared += 1
            for traced in full_basis:
                assert pruned.reduce(traced.poly).is_zero()
            for traced in pruned_basis:
                assert full.reduce(traced.poly).is_zero()
        assert compared > 50
