"""Discrete L-convex minimization on tree-grids, with exact solvers for
minimum-cost node-demand multiflows and minimum 0-extension."""

from .kernels import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"
