"""Exact construction and verification of unipotent Galois extensions."""

from __future__ import annotations

from .errors import UnipotentError

__version__ = "0.1.0"

__all__ = ["UnipotentError", "__version__"]
