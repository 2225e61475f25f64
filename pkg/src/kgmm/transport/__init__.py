"""Discrete optimal transport over the transportation polytope."""
