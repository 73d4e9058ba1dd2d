"""Nonreciprocal photon blockade in a pumped, quadratically coupled optomechanical system."""

__version__ = "0.1.0"
