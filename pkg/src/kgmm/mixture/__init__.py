"""Wasserstein-type distances and geodesics between Gaussian mixtures."""
