"""Kernel evaluation and spectral primitives."""
