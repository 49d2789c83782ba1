"""Numerical companion for linear (1-regularly situated) coverings in the plane."""

__version__ = "0.1.0"
