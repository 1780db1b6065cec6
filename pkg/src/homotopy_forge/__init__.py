"""Finite-presheaf engine for weak-model-category combinatorics."""

__version__ = "0.1.0"
