"""Exact-arithmetic toolkit: root data, Weyl groups, twisted affine Hecke
algebras, component groups of unramified type-A parameters, and pullback
decompositions of enhanced parameters."""

__version__ = "0.1.0"
