"""Configuration loading, validation and output path resolution."""
