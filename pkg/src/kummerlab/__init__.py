"""Computational companion for averaged Bateman-Horn statistics on n^r + k."""

__version__ = "0.1.0"
