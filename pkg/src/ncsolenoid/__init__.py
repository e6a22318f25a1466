"""Computational tools for self-coverings of tori and their solenoid limits."""

__version__ = "0.1.0"
