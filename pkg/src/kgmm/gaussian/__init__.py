"""Closed-form optimal transport between Gaussians in input space."""
