"""Exact knot invariants, twisting obstructions and linking-matrix Kirby calculus."""

__version__ = "0.1.0"
