"""Exact computational models for finite inverse semigroups and their K-theory identities."""

__version__ = "0.1.0"
