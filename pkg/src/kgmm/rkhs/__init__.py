"""Kernel Wasserstein distances between Gaussians in a reproducing kernel Hilbert space."""
