"""Equilibrium solvers for half-street poker games."""

__version__ = "0.1.0"
