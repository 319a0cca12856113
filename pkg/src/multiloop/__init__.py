"""Exact computations in multi-loop affine Lie algebras."""

__version__ = "0.1.0"
