"""Numerical toolkit for mean values of multiplicative functions on residue classes."""

__version__ = "0.1.0"
