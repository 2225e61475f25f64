"""Test suite for kgmm."""
