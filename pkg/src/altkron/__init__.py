"""Exact computations with alternative algebras that contain 2x2 matrices."""

__version__ = "0.1.0"
