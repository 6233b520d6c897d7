"""Tests for the operator statement syntax."""

import pytest

from src.ncproofs.errors import ParseError, SortError
from src.ncproofs.logic.formulas import Equation, Implies, Not, Shape
from src.ncproofs.logic.parser import parse_statement, parse_term
from src.ncproofs.logic.terms import Product, Scaled, Sort, SortContext, Zero

MP_EXISTENCE = """
var a, p, q : U -> V
var b : V -> U
involution _adj
forall a, p, q
exists b
(a = p*a_adj*a & a = a*a_adj*q) ->
  (a*b*a = a & b*a*b = b & b_adj*a_adj = a*b & a_adj*b_adj = b*a)
"""


class TestParseStatement:
    """Tests for whole statements."""

    @pytest.mark.unit
    def test_moore_penrose_existence(self) -> None:
        """Test the existence statement with its involution."""
        statement = parse_statement(MP_EXISTENCE)
        assert statement.shape is Shape.FORALL_EXISTS
        assert statement.universals == ("a", "p", "q", "a_adj", "p_adj", "q_adj")
        assert statement.existentials == ("b", "b_adj")
        assert statement.context.sort_of("a_adj") == Sort("V", "U")
        assert statement.context.sort_of("b_adj") == Sort("U", "V")
        assert statement.algebra.names == ("a", "p", "q", "b", "a_adj", "p_adj", "q_adj", "b_adj")
        assert statement.adjoint is not None
        assert statement.adjoint.partner("b") == "b_adj"

    @pytest.mark.unit
    def test_connectives(self) -> None:
        """Test negation, disequality and implication."""
        statement = parse_statement("var e : U -> U\nforall e\n~(e = 0) -> e != 0  # comment\n")
        formula = statement.formula
        zero = Zero(Sort("U", "U"))
        e = statement.context.var("e")
        assert str(statement) == "forall e: (e != 0) -> (e != 0)"
        assert formula.body == Implies(Not(Equation(e, zero)), Not(Equation(e, zero)))  # type: ignore[attr-defined]

    @pytest.mark.unit
    def test_declared_partner_must_match(self) -> None:
        """Test that an explicitly declared adjoint needs the reversed sort."""
        with pytest.raises(SortError, match="must have sort V -> U"):
            parse_statement("var a : U -> V\nvar a_adj : U -> V\ninvolution _adj\nforall a\na = a\n")

    @pytest.mark.unit
    @pytest.mark.parametrize(
        ("text", "message"),
        [
            ("var a : U -> V\nforall a\n", "no body"),
            ("var a : U -> V\nforall a\na = c\n", "Undeclared variable 'c'"),
            ("var a U -> V\nforall a\na = a\n", "Expected 'var"),
            ("var a : U -> V\nforall a\na = a )\n", "Unexpected token"),
            ("var a : U -> V\nforall a\na ? a\n", "Unexpected character"),
            ("var a : U -> V\nforall a\na a\n", "Expected '=' or '!='"),
            ("var 1a : U -> V\nforall a\na = a\n", "Invalid variable name"),
        ],
    )
    def test_syntax_errors(self, text: str, message: str) -> None:
        """Test syntax errors with their messages."""
        with pytest.raises(ParseError, match=message):
            parse_statement(text)

    @pytest.mark.unit
    def test_error_position(self) -> None:
        """Test that positions count characters of the whole text."""
        text = "var a : U -> V\nforall a\na = c\n"
        with pytest.raises(ParseError) as info:
            parse_statement(text)
        assert info.value.position == text.index("c\n")

    @pytest.mark.unit
    @pytest.mark.parametrize(
        ("text", "message"),
        [
            ("var a : U -> V\nforall a\na*a = a\n", "Cannot compose"),
            ("var a : U -> V\nvar b : V -> U\nforall a, b\na = b\n", "has sort"),
            ("var a : U -> V\nforall a\n0 = 0\n", "Cannot infer"),
            ("var a : U -> V\nforall a\na = 2\n", "not a morphism"),
            ("var a : U -> V\nforall a, z\na = a\n", "'z' is not declared"),
        ],
    )
    def test_sort_errors(self, text: str, message: str) -> None:
        """Test ill-sorted statements."""
        with pytest.raises(SortError, match=message):
            parse_statement(text)


class TestParseTerm:
    """Tests for single terms."""

    @pytest.fixture()
    def context(self) -> SortContext:
        """Operators of the Moore-Penrose setting."""
        return SortContext(
            {
                "a": Sort("U", "V"),
                "p": Sort("U", "V"),
                "q": Sort("U", "V"),
                "a_adj": Sort("V", "U"),
                "p_adj": Sort("V", "U"),
                "q_adj": Sort("V", "U"),
            }
        )

    @pytest.mark.unit
    def test_inferred_sort(self, context: SortContext) -> None:
        """Test that the sort of a product is inferred."""
        term = parse_term("a_adj*q*p_adj", context)
        assert term.sort == Sort("V", "U")
        assert str(term) == "a_adj*q*p_adj"

    @pytest.mark.unit
    def test_coefficients_and_zero(self, context: SortContext) -> None:
        """Test integer factors and zero products."""
        term = parse_term("2*a*a_adj", context)
        assert term == Scaled(2, Product(context.var("a"), context.var("a_adj")))
        assert parse_term("0*a", context) == Zero(Sort("U", "V"))
        assert parse_term("0", context, Sort("V", "V")) == Zero(Sort("V", "V"))

    @pytest.mark.unit
    def test_expected_sort(self, context: SortContext) -> None:
        """Test that an explicit sort is enforced."""
        with pytest.raises(SortError, match="expected"):
            parse_term("a", context, Sort("V", "U"))

    @pytest.mark.unit
    def test_trailing_input(self, context: SortContext) -> None:
        """Test that a term must consume the whole text."""
        with pytest.raises(ParseError, match="trailing"):
            parse_term("a = a", context)
