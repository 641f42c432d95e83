"""Growable realizations of edge-length multisets in complete graphs."""
__version__ = "0.1.0"
