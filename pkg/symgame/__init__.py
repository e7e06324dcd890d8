"""Exact symmetry analysis of finite normal-form games."""

__version__ = "0.1.0"
