"""Exact-arithmetic toolkit for joins and fusions of comodule algebras."""

__version__ = "0.1.0"
