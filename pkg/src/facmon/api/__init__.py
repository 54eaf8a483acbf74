"""HTTP/JSON surface over the backend services."""

from .app import create_app, serve

__all__ = ["create_app", "serve"]
