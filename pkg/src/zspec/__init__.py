"""Numerical engine for Zeeman operators, zones, kernels and intertwiners on H-type groups."""

__version__ = "0.1.0"
