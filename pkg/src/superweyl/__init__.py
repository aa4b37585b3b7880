"""Exact matrix and symbol realizations of the superconformal algebras K(2), K'(4)^ and CK6."""

__version__ = "0.1.0"
