"""Integration tests for kgmm."""
