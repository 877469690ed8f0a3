"""Chronological Hurst exponent analysis of monthly count series."""

__version__ = "0.1.0"
