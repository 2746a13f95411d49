"""Dedekind sums, inversion numbers and the inversion polynomial f_b."""

__version__ = "0.1.0"
