"""Exact and numeric tools around left orders on SL(3, Z) and its actions on the circle."""

__version__ = "0.1.0"
