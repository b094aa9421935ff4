"""Finite-temperature critical Ising chain confronted with its thermal AdS/BTZ dual."""

__version__ = "0.1.0"
