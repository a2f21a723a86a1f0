"""Exact and p-adic verification tools for cyclotomic units and class groups in
the cyclotomic Z_p-tower of a real quadratic field where p splits."""

__version__ = "0.1.0"
