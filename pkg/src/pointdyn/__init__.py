"""Pointwise dynamics: expansivity balls, shadowing, specification, chaos and entropy at a point."""
__version__ = "0.1.0"
