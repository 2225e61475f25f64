"""Unit tests for kgmm."""
