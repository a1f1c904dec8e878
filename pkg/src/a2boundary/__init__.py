"""Combinatorial K-theory toolkit for chamber-regular groups on A~2 buildings."""

__version__ = "0.1.0"
