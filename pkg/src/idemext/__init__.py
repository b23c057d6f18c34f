"""Extriangulated structures on idempotent completions of quiver representation categories."""

__version__ = "0.1.0"
