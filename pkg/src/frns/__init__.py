"""Numerical laboratory for the fractional relativistic operator (-Delta + m^2)^s:
spectral grids, half-space extension, penalized ground states and
concentration diagnostics."""

__version__ = "0.1.0"
