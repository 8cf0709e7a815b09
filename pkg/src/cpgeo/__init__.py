"""Exact verification toolkit for left-invariant metric contact pairs."""

__version__ = "0.1.0"
