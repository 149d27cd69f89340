"""Exact variational calculus on jet spaces."""

__version__ = "0.1.0"
