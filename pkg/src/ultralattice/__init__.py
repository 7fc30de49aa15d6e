"""Exact lattices, gauge seminorms and almost elements over truncated perfectoid model rings."""
__version__ = "0.1.0"
