"""Numerical laboratory for cyclicity in Dirichlet-type spaces on the unit ball."""

__version__ = "0.1.0"
