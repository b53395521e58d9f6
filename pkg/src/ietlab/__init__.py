"""Exact interval exchange transformations and the groups H_{A,Q}."""

__version__ = "0.1.0"
