"""Command implementations for kgmm CLI."""
