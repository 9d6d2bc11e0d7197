"""
Modules package for the minimal-codes toolkit.

Finite-field arithmetic, exact linear algebra, code and projective-geometry
verification, support polynomials, constructions and parameter bounds.
"""

__version__ = "1.0.0"
__author__ = "Minimal Codes Toolkit"
