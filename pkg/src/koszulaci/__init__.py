"""Graded commutative algebra over a prime field, and the classification of
Koszul almost complete intersections."""

__version__ = "0.1.0"
