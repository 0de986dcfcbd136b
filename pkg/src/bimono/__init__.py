"""Bi-monotone pair partition combinatorics, an exact monotone Fock space
engine, and tensor-product models of bi-monotone independence."""

__version__ = "0.1.0"
