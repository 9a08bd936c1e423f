"""Exact and certified computation of nonnegativity Sturm bounds A(k) for level-one modular forms."""

__version__ = "0.1.0"
