"""Exact construction and verification of the quantum groupoid of a separability idempotent and its dual."""

__version__ = "0.1.0"
