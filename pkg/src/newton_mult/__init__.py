"""Exact multiplicities of graded systems of monomial ideals."""

__version__ = "0.1.0"
