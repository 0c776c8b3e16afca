"""Pseudospectral water waves, asymptotic models and convergence studies."""

__version__ = "0.1.0"
