"""Collapsibility, shellability and PL geometric category of 2-dimensional simplicial complexes."""

__version__ = "0.1.0"
