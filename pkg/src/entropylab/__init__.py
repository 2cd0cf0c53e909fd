"""Numerical toolkit for entropy computations on finite-dimensional
operator algebras and free-fermion chains."""

__version__ = "0.1.0"
