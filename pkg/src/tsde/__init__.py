"""Coloured-graph engine and Schwinger-Dyson equation generator for complex tensor models."""

__version__ = "0.1.0"
