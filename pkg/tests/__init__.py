"""Tests for multiloop."""
