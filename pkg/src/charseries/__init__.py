"""Characteristic-series refinement and automorphism census for small p-groups."""

__version__ = "0.1.0"
