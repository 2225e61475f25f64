"""CLI module for kgmm."""
