"""Utility modules for kgmm."""
