"""Homogeneous geodesics on pseudo-Riemannian 2-step nilmanifolds."""

__version__ = "0.1.0"
