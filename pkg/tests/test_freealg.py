"""Tests for free algebra arithmetic, parsing and the involution helpers."""

import random
from fractions import Fraction

import pytest

from src.ncproofs.errors import ParseError, UsageError
from src.ncproofs.freealg import (
    AdjointMap,
    ConjugationMap,
    FreeAlgebra,
    Polynomial,
    add_adj,
    add_tr_c,
    adjoint,
    dedupe_scalar_multiples,
    identity_relations,
    parse,
    pinv,
)
from tests.conftest import random_polynomial


class TestFreeAlgebra:
    """Tests for variable declaration and word helpers."""

    @pytest.mark.unit
    def test_declaration_order_fixes_letters(self, abcd: FreeAlgebra) -> None:
        """Test that letters follow declaration order."""
        assert abcd.index("a") == 0
        assert abcd.index("d") == 3
        assert abcd.name_of(abcd.letter("c")) == "c"

    @pytest.mark.unit
    def test_repeated_name_rejected(self) -> None:
        """Test that a variable cannot be declared twice."""
        with pytest.raises(UsageError, match="declared twice"):
            FreeAlgebra(["a", "b", "a"])

    @pytest.mark.unit
    def test_invalid_name_rejected(self) -> None:
        """Test that names must be identifiers."""
        with pytest.raises(UsageError, match="Invalid variable name"):
            FreeAlgebra(["a", "2b"])

    @pytest.mark.unit
    def test_unknown_variable(self, abcd: FreeAlgebra) -> None:
        """Test that looking up an undeclared name fails."""
        with pytest.raises(UsageError, match="Unknown variable"):
            abcd.index("z")

    @pytest.mark.unit
    def test_format_word_groups_powers(self, xy: FreeAlgebra) -> None:
        """Test that runs of a letter render as powers."""
        assert xy.format_word(xy.word("y", "x", "x", "y")) == "y*x^2*y"
        assert xy.format_word("") == "1"

    @pytest.mark.unit
    def test_extend_keeps_letters(self, abcd: FreeAlgebra) -> None:
        """Test that extending an algebra keeps existing words valid."""
        bigger = abcd.extend(["e"])
        p = abcd.parse("a*b - c")
        assert p.lift(bigger).format() == "-c + a*b"
        assert "e" in bigger

    @pytest.mark.unit
    def test_repr(self, xy: FreeAlgebra) -> None:
        """Test the algebra's printed form."""
        assert repr(xy) == "Free Algebra on 2 generators (x, y) over Rational Field"


class TestParsing:
    """Tests for the polynomial text grammar."""

    @pytest.mark.unit
    def test_constant_term(self, abcd: FreeAlgebra) -> None:
        """Test that an integer parses to a multiple of the empty word."""
        p = abcd.parse("a*b - 1")
        assert p.coefficient(abcd.word("a", "b")) == 1
        assert p.coefficient("") == -1

    @pytest.mark.unit
    def test_powers_and_parentheses(self, xy: FreeAlgebra) -> None:
        """Test powers and bracketed sums."""
        assert xy.parse("(x + y)^2") == xy.parse("x^2 + x*y + y*x + y^2")
        assert xy.parse("y^3").format() == "y^3"

    @pytest.mark.unit
    def test_rational_coefficients(self, abcd: FreeAlgebra) -> None:
        """Test that fractions are kept exactly."""
        p = abcd.parse("1/2*a*b - c")
        assert p.coefficient(abcd.word("a", "b")) == Fraction(1, 2)
        assert p.format() == "-c + 1/2*a*b"
        assert not p.is_integral()

    @pytest.mark.unit
    def test_parse_from_names(self) -> None:
        """Test parsing against a list of names instead of an algebra."""
        p = parse("y*x - y", ["x", "y"])
        assert p.format() == "-y + y*x"

    @pytest.mark.unit
    def test_unknown_identifier_position(self, abcd: FreeAlgebra) -> None:
        """Test that an unknown identifier is reported with its position."""
        with pytest.raises(ParseError, match="Unknown identifier 'e'") as info:
            abcd.parse("a + e")
        assert info.value.position == 4

    @pytest.mark.unit
    @pytest.mark.parametrize("text", ["", "a +", "a * * b", "(a + b", "a^b", "a^1/2"])
    def test_syntax_errors(self, abcd: FreeAlgebra, text: str) -> None:
        """Test that malformed text raises ParseError."""
        with pytest.raises(ParseError):
            abcd.parse(text)

    @pytest.mark.unit
    def test_zero(self, abcd: FreeAlgebra) -> None:
        """Test that cancelling terms give the zero polynomial."""
        p = abcd.parse("a*b - a*b")
        assert p.is_zero()
        assert p.format() == "0"
        assert abcd.parse("0") == p


class TestArithmetic:
    """Tests for ring operations."""

    @pytest.mark.unit
    def test_noncommutative_product(self, abcd: FreeAlgebra) -> None:
        """Test that products keep the order of factors."""
        a, b = abcd.gen("a"), abcd.gen("b")
        assert a * b != b * a
        assert (a * b - b * a).format() == "a*b - b*a"

    @pytest.mark.unit
    def test_scalars(self, abcd: FreeAlgebra) -> None:
        """Test integer and fraction scaling on both sides."""
        a = abcd.gen("a")
        assert 2 * a == a * 2
        assert (a / 2).coefficient(abcd.word("a")) == Fraction(1, 2)
        assert a - 1 == -(1 - a)
        assert abcd.one() == 1

    @pytest.mark.unit
    def test_power(self, xy: FreeAlgebra) -> None:
        """Test powers, including the zeroth."""
        x = xy.gen("x")
        assert x**0 == xy.one()
        assert (x**3).degree() == 3
        with pytest.raises(UsageError):
            x ** -1  # noqa: B018

    @pytest.mark.unit
    def test_mixing_algebras_fails(self, abcd: FreeAlgebra, xy: FreeAlgebra) -> None:
        """Test that polynomials of different algebras do not mix."""
        with pytest.raises(UsageError, match="different algebras"):
            abcd.gen("a") + xy.gen("x")  # noqa: B018

    @pytest.mark.unit
    def test_substitute(self, abcd: FreeAlgebra) -> None:
        """Test replacing variables by polynomials."""
        p = abcd.parse("a*b - d")
        q = p.substitute({"b": abcd.parse("c + 1")})
        assert q == abcd.parse("a*c + a - d")

    @pytest.mark.unit
    def test_monic_and_binomial(self, abcd: FreeAlgebra) -> None:
        """Test normalising the leading coefficient and the binomial check."""
        p = abcd.parse("-2*a*b + 4*c")
        assert p.monic() == abcd.parse("a*b - 2*c")
        assert abcd.parse("a*b - c").is_binomial()
        assert abcd.parse("a*b").is_binomial()
        assert not p.is_binomial()

    @pytest.mark.unit
    def test_hash_consistent_with_equality(self, abcd: FreeAlgebra) -> None:
        """Test that equal polynomials collapse in a set."""
        assert len({abcd.parse("a + b"), abcd.parse("b + a"), abcd.parse("a - b")}) == 2

    @pytest.mark.unit
    def test_ring_axioms_on_random_polynomials(self, abcd: FreeAlgebra, rng: random.Random) -> None:
        """Test associativity and distributivity on seeded random samples."""
        for _ in range(100):
            p, q, r = (random_polynomial(rng, abcd) for _ in range(3))
            assert (p * q) * r == p * (q * r)
            assert p * (q + r) == p * q + p * r
            assert (p + q) - q == p


class TestAdjoint:
    """Tests for the involution and the adjoint closure of assumptions."""

    @pytest.mark.unit
    def test_adjoint_reverses_words(self, mp_algebra: FreeAlgebra) -> None:
        """Test that the adjoint reverses products and swaps partners."""
        star = AdjointMap.from_suffix(mp_algebra)
        assert adjoint(mp_algebra.parse("a*b - 2*c"), star) == mp_algebra.parse("b_adj*a_adj - 2*c_adj")
        assert star(mp_algebra.parse("a_adj")) == mp_algebra.parse("a")

    @pytest.mark.unit
    def test_missing_partner(self, abcd: FreeAlgebra) -> None:
        """Test that the adjoint needs a partner for every variable."""
        star = AdjointMap.from_pairs(abcd, [("a", "b")])
        with pytest.raises(UsageError, match="no adjoint partner"):
            adjoint(abcd.parse("c"), star)

    @pytest.mark.unit
    def test_self_adjoint(self, abcd: FreeAlgebra) -> None:
        """Test that a self-adjoint variable maps to itself."""
        star = AdjointMap.from_pairs(abcd, [("a", "a"), ("b", "c"), ("d", "d")])
        assert adjoint(abcd.parse("a*b*d"), star) == abcd.parse("d*c*a")

    @pytest.mark.unit
    def test_anti_homomorphism_on_random_pairs(self, mp_algebra: FreeAlgebra, rng: random.Random) -> None:
        """Test (p*q)* = q* p* and p** = p on a thousand random pairs."""
        star = AdjointMap.from_suffix(mp_algebra)
        for _ in range(1000):
            p, q = random_polynomial(rng, mp_algebra), random_polynomial(rng, mp_algebra)
            assert star(p * q) == star(q) * star(p)
            assert star(star(p)) == p

    @pytest.mark.unit
    def test_add_adj_drops_scalar_multiples(self, mp_algebra: FreeAlgebra) -> None:
        """Test that adjoints already present up to sign are not added again."""
        star = AdjointMap.from_suffix(mp_algebra)
        gens = pinv("a", "b", "a_adj", "b_adj", mp_algebra)
        closed = add_adj(gens, star)
        assert len(closed) == 6
        assert closed[:4] == gens
        assert mp_algebra.parse("a_adj*b_adj*a_adj - a_adj") in closed

    @pytest.mark.unit
    def test_dedupe(self, abcd: FreeAlgebra) -> None:
        """Test removal of zeros and scalar multiples."""
        polys = [abcd.parse("a - b"), abcd.zero(), abcd.parse("2*b - 2*a"), abcd.parse("c")]
        assert dedupe_scalar_multiples(polys) == [abcd.parse("a - b"), abcd.parse("c")]


class TestGenerators:
    """Tests for the helpers that build common assumption sets."""

    @pytest.mark.unit
    def test_pinv(self, mp_algebra: FreeAlgebra) -> None:
        """Test the four Penrose identities."""
        polys = pinv("a", "b", "a_adj", "b_adj", mp_algebra)
        assert polys == [
            mp_algebra.parse("a*b*a - a"),
            mp_algebra.parse("b*a*b - b"),
            mp_algebra.parse("b_adj*a_adj - a*b"),
            mp_algebra.parse("a_adj*b_adj - b*a"),
        ]

    @pytest.mark.unit
    def test_pinv_with_compound_inverse(self) -> None:
        """Test that the inverse may be a product."""
        algebra = FreeAlgebra(["a", "p", "q", "a_adj", "p_adj", "q_adj"])
        candidate = algebra.parse("a_adj*q*p_adj")
        polys = pinv(algebra.gen("a"), candidate, algebra.gen("a_adj"), algebra.parse("p*q_adj*a"))
        assert polys[0] == algebra.parse("a*a_adj*q*p_adj*a - a")

    @pytest.mark.unit
    def test_pinv_names_need_algebra(self) -> None:
        """Test that plain names cannot be used without an algebra."""
        with pytest.raises(UsageError, match="need an algebra"):
            pinv("a", "b", "a_adj", "b_adj")

    @pytest.mark.unit
    def test_identity_relations(self) -> None:
        """Test idempotence, self-adjointness and the unit laws."""
        algebra = FreeAlgebra(["b", "c", "i", "i_adj"])
        relations = identity_relations("i", "i_adj", algebra, right_units=["b"], left_units=["c"])
        assert relations == [
            algebra.parse("i*i - i"),
            algebra.parse("i - i_adj"),
            algebra.parse("b*i - b"),
            algebra.parse("i*c - c"),
        ]

    @pytest.mark.unit
    def test_transpose_and_conjugate(self) -> None:
        """Test that transposition reverses words and conjugation keeps their order."""
        algebra = FreeAlgebra(["a", "a_adj", "a_tr", "a_c", "b", "b_adj", "b_tr", "b_c"])
        maps = ConjugationMap.from_suffixes(algebra)
        p = algebra.parse("a*b - a_adj")
        assert maps.transpose(p) == algebra.parse("b_tr*a_tr - a_c")
        assert maps.conjugate(p) == algebra.parse("a_c*b_c - a_tr")

    @pytest.mark.unit
    def test_add_tr_c(self) -> None:
        """Test that transposed and conjugated copies are appended."""
        algebra = FreeAlgebra(["a", "a_adj", "a_tr", "a_c"])
        maps = ConjugationMap.from_suffixes(algebra)
        closed = add_tr_c([algebra.parse("a*a - a")], maps)
        assert closed == [algebra.parse("a*a - a"), algebra.parse("a_tr*a_tr - a_tr"), algebra.parse("a_c*a_c - a_c")]

    @pytest.mark.unit
    def test_conjugate_needs_family(self, abcd: FreeAlgebra) -> None:
        """Test that conjugation fails without declared partners."""
        maps = ConjugationMap.from_suffixes(abcd)
        with pytest.raises(UsageError, match="no conjugate partner"):
            maps.conjugate(abcd.parse("a"))

    @pytest.mark.unit
    def test_polynomial_repr(self, abcd: FreeAlgebra) -> None:
        """Test the debugging representation."""
        assert repr(Polynomial(abcd, {abcd.word("a"): 1})) == "Polynomial('a')"
