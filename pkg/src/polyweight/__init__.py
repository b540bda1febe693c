"""Numerical laboratory for weighted polynomial inequalities with nondoubling weights."""

__version__ = "0.1.0"
