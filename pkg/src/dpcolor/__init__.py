"""Exact and heuristic computation of the DP color function."""

__version__ = "0.1.0"
