"""Exact torsion invariants of cochain complexes and cellular manifolds."""

__version__ = "0.1.0"
