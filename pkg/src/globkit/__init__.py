"""Symbolic kernel for globular coherence towers and their finite models."""

__version__ = "0.1.0"
