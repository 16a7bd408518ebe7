"""Executable workbench for critical points of left-distributive terms."""

__version__ = "0.1.0"
