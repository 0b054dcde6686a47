"""Numerical verification of metric weak f-structures on coordinate charts."""

__version__ = "0.1.0"
