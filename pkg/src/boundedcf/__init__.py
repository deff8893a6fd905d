"""Periodic continued fractions with bounded partial quotients in real quadratic fields."""

__version__ = "0.1.0"
