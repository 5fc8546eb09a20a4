"""Decide and construct minimally almost periodic topologies on abelian groups."""

__version__ = "0.1.0"
