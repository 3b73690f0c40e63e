"""Exact verification of infinitesimal 2-braidings and the categorified KZ 2-connection."""

__version__ = "0.1.0"
