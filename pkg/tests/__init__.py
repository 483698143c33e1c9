"""Tests for agr."""
