"""Measurement-only stabilizer circuits on the Kitaev honeycomb."""

__version__ = "0.1.0"
