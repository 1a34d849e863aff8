"""HTTP service exposing the solver, planner, simulator and self checks."""

from .app import app, create_app

__all__ = ["app", "create_app"]
