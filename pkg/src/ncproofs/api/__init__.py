"""HTTP handlers for the Connexion OpenAPI endpoints."""
