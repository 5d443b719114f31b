"""Exact iterative-derivation (Hasse-Schmidt) algebra in characteristic p."""

__version__ = "0.1.0"
