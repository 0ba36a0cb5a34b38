"""Exact computations for a Heegaard Floer link TQFT over F2[u,v]."""

__version__ = "0.1.0"
