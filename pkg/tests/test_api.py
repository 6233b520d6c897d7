"""Tests for the Connexion HTTP API.

Connexion 3.x registers routes in the ASGI middleware layer, not in Flask's
url_map, so requests go through connexion_app.test_client().
"""

from typing import Any

import pytest

from src.ncproofs.config import __version__

A1 = """
[algebra]
variables = ["a", "b", "c", "d"]
[assumptions]
polynomials = ["a*b - d", "c - 1"]
[claims]
polynomials = ["a*b*c - d"]
"""

A4 = '[algebra]\nvariables = ["x", "y"]\n[assumptions]\npolynomials = ["x*y*x - x*y", "y*x*x*y - y"]\n'

STATEMENT = """
[statement]
text = '''
var e : U -> U
var a : U -> U
forall e, a
(e*e = e & e*a = a) -> e*e*a = a
'''
"""


class TestHealthEndpoint:
    """Tests for the health check endpoint."""

    @pytest.mark.integration
    def test_health(self, connexion_client: Any) -> None:
        """Test that /health answers with the version."""
        response = connexion_client.get("/health")
        assert response.status_code == 200
        assert response.json() == {"status": "healthy", "version": __version__}


class TestCertifyEndpoint:
    """Tests for /api/certify and /api/verify."""

    @pytest.mark.integration
    def test_certify(self, connexion_client: Any) -> None:
        """Test that the certificate document comes back in the payload."""
        response = connexion_client.post("/api/certify", json={"problem": A1})
        assert response.status_code == 200
        data = response.json()
        assert data["exit_code"] == 0
        assert data["text"] == "-d + a*b*c = (-d + a*b)*c + d*(-1 + c)"
        assert data["payload"]["status"] == "proved"

    @pytest.mark.integration
    def test_certify_then_verify(self, connexion_client: Any) -> None:
        """Test that the returned document verifies."""
        document = connexion_client.post("/api/certify", json={"problem": A1}).json()["payload"]
        response = connexion_client.post("/api/verify", json={"problem": A1, "document": document})
        assert response.status_code == 200
        assert response.json()["payload"]["status"] == "verified"

    @pytest.mark.integration
    def test_failed_certification_is_not_an_error(self, connexion_client: Any) -> None:
        """Test that an exhausted budget is a 200 with exit code 1."""
        problem = A1.replace('"c - 1"', '"c - 2"')
        response = connexion_client.post("/api/certify", json={"problem": problem, "maxiter": 2})
        assert response.status_code == 200
        assert response.json()["exit_code"] == 1

    @pytest.mark.integration
    def test_malformed_problem(self, connexion_client: Any) -> None:
        """Test that problem file errors are a 400 with a message."""
        response = connexion_client.post("/api/certify", json={"problem": "[algebra\n"})
        assert response.status_code == 400
        data = response.json()
        assert data["status"] == "error"
        assert "TOML" in data["message"]

    @pytest.mark.integration
    def test_missing_problem(self, connexion_client: Any) -> None:
        """Test that the request body is validated against the OpenAPI schema."""
        response = connexion_client.post("/api/certify", json={"maxiter": 3})
        assert response.status_code == 400


class TestOtherEndpoints:
    """Tests for /api/gb and /api/prove."""

    @pytest.mark.integration
    def test_gb(self, connexion_client: Any) -> None:
        """Test the interreduced basis over HTTP."""
        response = connexion_client.post("/api/gb", json={"problem": A4, "interreduce": True})
        assert response.status_code == 200
        assert response.json()["payload"]["basis"] == ["-y + y*x", "-y + y^2"]

    @pytest.mark.integration
    def test_prove(self, connexion_client: Any) -> None:
        """Test that a universal statement is proved with explicit bounds."""
        response = connexion_client.post(
            "/api/prove", json={"problem": STATEMENT, "herbrand": {"degree": 1}, "max_clauses": 4}
        )
        assert response.status_code == 200
        data = response.json()
        assert data["exit_code"] == 0
        assert data["payload"]["status"] == "true"

    @pytest.mark.integration
    def test_prove_without_statement(self, connexion_client: Any) -> None:
        """Test that a problem without a statement is rejected."""
        response = connexion_client.post("/api/prove", json={"problem": A1})
        assert response.status_code == 400
        assert "[statement]" in response.json()["message"]
