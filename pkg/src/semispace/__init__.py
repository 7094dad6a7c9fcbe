"""Combinatorics and algebra of linear spaces with some coordinates inverted."""

__version__ = "0.1.0"
