"""Matching the cohomology of configuration spaces of points in R^3 with flag manifolds."""

__version__ = "0.1.0"
