"""Exact computations for rational models of representations of compact and real reductive groups."""

__version__ = "0.1.0"
