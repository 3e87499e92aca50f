"""Validation toolkit for purchase-based disease-risk proxies."""

__version__ = "0.1.0"
