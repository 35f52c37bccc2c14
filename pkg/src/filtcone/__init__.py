"""Exact p-filtered symplectic cohomology of finite cdga models."""

__version__ = "0.1.0"
