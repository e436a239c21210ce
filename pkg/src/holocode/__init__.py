"""Holographic stabilizer graph codes built from six-qubit AME blocks."""

__version__ = "0.1.0"
