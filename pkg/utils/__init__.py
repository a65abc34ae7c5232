"""Combinatorial and algebraic core: graphs, ideals, splittings, sweeps and export."""
