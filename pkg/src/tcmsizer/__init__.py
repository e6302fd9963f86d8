"""Simulator-free transistor sizing from regression-based device models."""

__version__ = "0.1.0"
