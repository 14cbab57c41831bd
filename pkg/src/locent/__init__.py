"""Localizable entanglement of noisy graph states and its lower bounds."""

__version__ = "0.1.0"
