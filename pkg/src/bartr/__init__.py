"""Bimanual arm reaching test: session simulation, Gaussian-process
interaction models, nonuse scoring, and the surrounding statistics."""

__version__ = "0.1.0"
