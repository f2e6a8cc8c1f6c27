"""HTTP service wrapping the dnafec core package."""

from .app import app

__all__ = ["app"]
