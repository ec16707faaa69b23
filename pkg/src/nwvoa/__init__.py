"""Exact free-field vertex algebra engine for the Nappi-Witten VOA."""

__version__ = "0.1.0"
