"""Exact checks for homogeneous algebras presented by multilinear forms."""

__version__ = "0.1.0"
