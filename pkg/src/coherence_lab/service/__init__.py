"""HTTP service wrapping the coherence toolbox."""

from .app import app, create_app

__all__ = ["app", "create_app"]
