"""Exact tools for graded double extensions of two-dimensional regular algebras."""

__version__ = "0.1.0"
