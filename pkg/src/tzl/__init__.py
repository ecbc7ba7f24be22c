"""Finite-truncation numerical audits of prime k-tuple series."""

__version__ = "0.1.0"
