"""Weak Hopf algebras, their renormalization-fixed-point MPDOs and the associated quantum channels."""
__version__ = "0.1.0"
