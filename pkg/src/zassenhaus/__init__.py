"""Centres of enveloping algebras and Zassenhaus varieties of small reductive Lie algebras in characteristic p."""

__version__ = "0.1.0"
