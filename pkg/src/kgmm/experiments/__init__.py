"""Experiment protocols behind the command-line tools."""
