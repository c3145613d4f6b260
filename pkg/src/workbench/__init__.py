"""Exact integral cohomology tools for level-p arithmetic groups."""

__version__ = "0.1.0"
