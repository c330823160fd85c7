"""Nested harmonic sums, their Mellin-transform representations and analytic continuation."""

__version__ = "0.1.0"
