"""Exact Matsuki duality for loop groups of classical matrix families."""

__version__ = "0.1.0"
