"""Exact certification of the Calabi-energy computations on CP2 # 2(-CP2)."""

__version__ = "0.1.0"
