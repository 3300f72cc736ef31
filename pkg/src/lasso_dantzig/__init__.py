"""Exact Lasso paths by LARS and the Dantzig selector by linear programming."""

__version__ = "0.1.0"
