"""Exact computation of derivations and local derivations of finite-dimensional algebras."""

__version__ = "0.1.0"
