"""Toolkit of exact reductions between boolean problems and polynomial,
geometric, and spectral reformulations, each paired with a brute-force
oracle for verification at desk scale."""

__version__ = "0.1.0"
