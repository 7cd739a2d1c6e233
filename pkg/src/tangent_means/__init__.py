"""Tangent-sphere mean transforms and their inversion via fractional calculus."""

__version__ = "0.1.0"
