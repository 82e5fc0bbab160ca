"""Exact upper-triangular SL2 representations of surface groups."""

__version__ = "0.1.0"
