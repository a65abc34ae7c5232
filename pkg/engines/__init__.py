"""Computational engines: exact homology ranks and Betti tables."""
