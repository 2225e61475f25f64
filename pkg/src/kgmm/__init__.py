"""kgmm - Wasserstein-type distances between Gaussian mixtures in a kernel feature space."""

__version__ = "0.1.0"
