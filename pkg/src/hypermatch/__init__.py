"""Homology of matching complexes of complete hypergraphs, with symmetric-group actions."""

__version__ = "0.1.0"
