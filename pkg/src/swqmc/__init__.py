"""Sliced Wasserstein distances via quasi-Monte Carlo direction sets."""

__version__ = "0.1.0"
