"""Tests for certificate documents and their re-verification."""

import copy
import json
from pathlib import Path
from typing import Any

import pytest

from src.ncproofs.certify import certify
from src.ncproofs.config import __version__
from src.ncproofs.document import (
    certify_document,
    dumps,
    load_document,
    validate_document,
    verify_document,
)
from src.ncproofs.errors import ProblemFileError
from src.ncproofs.problem import Problem, parse_problem

A1 = """
[algebra]
variables = ["a", "b", "c", "d"]

[assumptions]
polynomials = ["a*b - d", "c - 1"]

[claims]
polynomials = ["a*b*c - d"]
"""


@pytest.fixture()
def a1_problem() -> Problem:
    """a*b*c - d from a*b - d and c - 1."""
    return parse_problem(A1)


@pytest.fixture()
def a1_document(a1_problem: Problem) -> dict[str, Any]:
    """The certify document of the a1 problem."""
    report = certify(a1_problem.assumptions, a1_problem.claims, order=a1_problem.order)
    return certify_document(a1_problem, report, 0.5)


class TestCertifyDocument:
    """Tests for the machine-readable certify record."""

    @pytest.mark.unit
    def test_fields(self, a1_document: dict[str, Any]) -> None:
        """Test the document of a successful run."""
        assert a1_document["kind"] == "certify"
        assert a1_document["version"] == __version__
        assert a1_document["status"] == "proved"
        assert a1_document["variables"] == ["a", "b", "c", "d"]
        assert a1_document["assumptions"] == ["-d + a*b", "-1 + c"]
        assert a1_document["claims"] == ["-d + a*b*c"]
        assert a1_document["integer_clean"] == [True]
        assert a1_document["timing"] == {"seconds": 0.5}

    @pytest.mark.unit
    def test_certificate_records(self, a1_document: dict[str, Any]) -> None:
        """Test that certificate triples are stored with variable names and rational strings."""
        assert a1_document["certificates"] == [
            [
                {"left_coeff": "1", "left_word": [], "gen_index": 0, "right_coeff": "1", "right_word": ["c"]},
                {"left_coeff": "1", "left_word": ["d"], "gen_index": 1, "right_coeff": "1", "right_word": []},
            ]
        ]

    @pytest.mark.unit
    def test_deterministic_apart_from_timing(self, a1_problem: Problem, a1_document: dict[str, Any]) -> None:
        """Test that two runs agree on everything except the timing."""
        report = certify(a1_problem.assumptions, a1_problem.claims, order=a1_problem.order)
        second = certify_document(a1_problem, report, 2.0)
        assert {**second, "timing": None} == {**a1_document, "timing": None}

    @pytest.mark.unit
    def test_dumps(self, a1_document: dict[str, Any]) -> None:
        """Test that serialization sorts keys and ends with a newline."""
        text = dumps(a1_document)
        assert text.endswith("}\n")
        assert list(json.loads(text)) == sorted(a1_document)


class TestLoadDocument:
    """Tests for reading and validating documents."""

    @pytest.mark.unit
    def test_round_trip(self, tmp_path: Path, a1_document: dict[str, Any]) -> None:
        """Test that a written document loads unchanged."""
        path = tmp_path / "a1.json"
        path.write_text(dumps(a1_document), encoding="utf-8")
        assert load_document(path) == a1_document

    @pytest.mark.unit
    def test_not_json(self, tmp_path: Path) -> None:
        """Test that unreadable documents raise ProblemFileError."""
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(ProblemFileError, match="cannot read certificate document"):
            load_document(path)

    @pytest.mark.unit
    def test_missing_field(self, a1_document: dict[str, Any]) -> None:
        """Test that required fields are enforced."""
        del a1_document["integer_clean"]
        with pytest.raises(ProblemFileError, match="missing field 'integer_clean'"):
            validate_document(a1_document)

    @pytest.mark.unit
    def test_length_mismatch(self, a1_document: dict[str, Any]) -> None:
        """Test that every claim needs a certificate slot."""
        a1_document["certificates"].append(None)
        with pytest.raises(ProblemFileError, match="1 claims but 2 certificates"):
            validate_document(a1_document)

    @pytest.mark.unit
    def test_not_an_object(self) -> None:
        """Test that the top level must be an object."""
        with pytest.raises(ProblemFileError, match="expected a JSON object"):
            validate_document([])

    @pytest.mark.unit
    @pytest.mark.parametrize(
        ("changes", "message"),
        [
            ({"claims": 5, "certificates": 5}, "field 'claims' must be a list"),
            ({"certificates": "abc"}, "field 'certificates' must be a list"),
            ({"certificates": [7]}, "certificate #0 must be a list of records or null"),
        ],
    )
    def test_fields_of_the_wrong_type(
        self, a1_problem: Problem, a1_document: dict[str, Any], changes: dict[str, Any], message: str
    ) -> None:
        """Test that non-list claims or certificates are input errors, not crashes."""
        a1_document.update(changes)
        with pytest.raises(ProblemFileError, match=message):
            verify_document(a1_problem, a1_document)


class TestVerifyDocument:
    """Tests for independent re-verification."""

    @pytest.mark.unit
    def test_valid(self, a1_problem: Problem, a1_document: dict[str, Any]) -> None:
        """Test that the emitted certificate verifies."""
        checks = verify_document(a1_problem, a1_document)
        assert [check.ok for check in checks] == [True]
        assert checks[0].claim == "-d + a*b*c"

    @pytest.mark.unit
    def test_tampered_coefficient(self, a1_problem: Problem, a1_document: dict[str, Any]) -> None:
        """Test that a changed coefficient is reported with the expanded polynomial."""
        tampered = copy.deepcopy(a1_document)
        tampered["certificates"][0][1]["left_coeff"] = "2"
        checks = verify_document(a1_problem, tampered)
        assert not checks[0].ok
        assert checks[0].reason == "expands to -2*d + d*c + a*b*c"

    @pytest.mark.unit
    def test_missing_certificate(self, a1_problem: Problem, a1_document: dict[str, Any]) -> None:
        """Test that an empty slot fails verification."""
        a1_document["certificates"] = [None]
        checks = verify_document(a1_problem, a1_document)
        assert checks[0].reason == "no certificate"

    @pytest.mark.unit
    def test_malformed_record(self, a1_problem: Problem, a1_document: dict[str, Any]) -> None:
        """Test that malformed records raise ProblemFileError."""
        del a1_document["certificates"][0][0]["gen_index"]
        with pytest.raises(ProblemFileError, match="Malformed certificate record #0"):
            verify_document(a1_problem, a1_document)

    @pytest.mark.unit
    def test_other_problem(self, a1_document: dict[str, Any]) -> None:
        """Test that the claim count must match the problem."""
        other = parse_problem(A1.replace('["a*b*c - d"]', '["a*b*c - d", "c - 1"]'))
        with pytest.raises(ProblemFileError, match="1 claims, the problem 2"):
            verify_document(other, a1_document)
