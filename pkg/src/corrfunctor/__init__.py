"""Correspondence functors, finite lattices and algebra functors with exact arithmetic."""

__version__ = "0.1.0"
