"""Multi-objective land-use allocation toolkit."""

__version__ = "0.1.0"
