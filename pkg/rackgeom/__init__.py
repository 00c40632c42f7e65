"""Finite rack and quandle geometry, cohomology and free-quandle experiments."""

__version__ = "1.0.0"
