"""Exact Schouten calculus and Poisson extension tools for polynomial rings."""

__version__ = "0.1.0"
