"""Exact and certified arithmetic for representations in algebraic bases."""

__version__ = "0.1.0"
