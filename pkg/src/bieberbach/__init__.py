"""Exact-arithmetic verification toolkit for the computational core of the
Bieberbach conjecture proof: the formal Loewner-derivative identity and the
positivity-via-perfect-squares structure of the Legendre kernel coefficients.
"""

from .rationals import Rat, rat

__version__ = "0.1.0"

__all__ = ["Rat", "rat", "__version__"]
