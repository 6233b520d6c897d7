"""Tests for ncproofs."""
