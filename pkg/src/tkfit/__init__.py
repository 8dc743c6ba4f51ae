"""Trimmed Kolmogorov distance tools."""
__version__ = "0.1.0"
