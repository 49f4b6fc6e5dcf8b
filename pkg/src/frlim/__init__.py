"""Computational toolkit for fr-codes: functors on groups written as ideals of free group rings."""

__version__ = "0.1.0"
