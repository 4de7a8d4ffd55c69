"""Exact-rational B∞-algebras: braces, deformations, actions, extensions and Hochschild data."""

__version__ = "0.1.0"
