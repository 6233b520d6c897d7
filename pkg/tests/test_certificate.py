"""Tests for cofactor certificates."""

from fractions import Fraction

import pytest

from src.ncproofs.certificate import Certificate, Triple, expand_cofactors
from src.ncproofs.errors import ProblemFileError, UsageError
from src.ncproofs.freealg import FreeAlgebra


@pytest.fixture()
def a1_certificate(abcd: FreeAlgebra) -> Certificate:
    """``(a*b - d)*c + d*(c - 1)``."""
    return Certificate(
        (
            Triple(Fraction(1), "", 0, Fraction(1), abcd.word("c")),
            Triple(Fraction(1), abcd.word("d"), 1, Fraction(1), ""),
        )
    )


class TestCertificate:
    """Tests for the triple container."""

    @pytest.mark.unit
    def test_as_tuples(self, abcd: FreeAlgebra, a1_certificate: Certificate) -> None:
        """Test the human-readable tuples with 1 for empty words."""
        assert a1_certificate.as_tuples(abcd) == [("1", 0, "c"), ("d", 1, "1")]

    @pytest.mark.unit
    def test_as_tuples_with_coefficients(self, abcd: FreeAlgebra) -> None:
        """Test that non-unit coefficients are folded into the rendered cofactor."""
        cert = Certificate((Triple(Fraction(-2), abcd.word("a"), 0, Fraction(1, 3), abcd.word("b")),))
        assert cert.as_tuples(abcd) == [("-2*a", 0, "1/3*b")]
        assert cert.triples[0].coefficient == Fraction(-2, 3)
        assert not cert.is_integral()

    @pytest.mark.unit
    def test_from_mapping_drops_zeros(self, abcd: FreeAlgebra) -> None:
        """Test that zero cofactors are left out."""
        cert = Certificate.from_mapping({("", 0, ""): Fraction(0), (abcd.word("a"), 1, ""): Fraction(3)})
        assert len(cert) == 1
        assert cert.triples[0] == Triple(Fraction(3), abcd.word("a"), 1, Fraction(1), "")

    @pytest.mark.unit
    def test_records(self, abcd: FreeAlgebra, a1_certificate: Certificate) -> None:
        """Test the plain-record form used by certificate documents."""
        records = a1_certificate.to_records(abcd)
        assert records[1] == {
            "left_coeff": "1",
            "left_word": ["d"],
            "gen_index": 1,
            "right_coeff": "1",
            "right_word": [],
        }
        assert Certificate.from_records(records, abcd) == a1_certificate

    @pytest.mark.unit
    @pytest.mark.parametrize(
        "record",
        [
            {"left_word": [], "gen_index": 0, "right_coeff": "1", "right_word": []},
            {"left_coeff": "x", "left_word": [], "gen_index": 0, "right_coeff": "1", "right_word": []},
            {"left_coeff": "1/0", "left_word": [], "gen_index": 0, "right_coeff": "1", "right_word": []},
            {"left_coeff": "1", "left_word": ["q"], "gen_index": 0, "right_coeff": "1", "right_word": []},
        ],
    )
    def test_malformed_records(self, abcd: FreeAlgebra, record: dict[str, object]) -> None:
        """Test that broken records are reported as problem file errors."""
        with pytest.raises(ProblemFileError, match="Malformed certificate record #0"):
            Certificate.from_records([record], abcd)


class TestExpandCofactors:
    """Tests for certificate expansion."""

    @pytest.mark.unit
    def test_expands_to_claim(self, abcd: FreeAlgebra, a1_certificate: Certificate) -> None:
        """Test that the A.1 certificate expands to a*b*c - d."""
        assumptions = [abcd.parse("a*b - d"), abcd.parse("c - 1")]
        assert expand_cofactors(a1_certificate, assumptions) == abcd.parse("a*b*c - d")

    @pytest.mark.unit
    def test_index_out_of_range(self, abcd: FreeAlgebra, a1_certificate: Certificate) -> None:
        """Test that a triple pointing past the assumptions is rejected."""
        with pytest.raises(UsageError, match="out of range"):
            expand_cofactors(a1_certificate, [abcd.parse("a*b - d")])

    @pytest.mark.unit
    def test_empty(self, abcd: FreeAlgebra) -> None:
        """Test that the empty certificate expands to zero."""
        assert expand_cofactors(Certificate(), [], abcd).is_zero()
        with pytest.raises(UsageError, match="algebra is needed"):
            expand_cofactors(Certificate(), [])
