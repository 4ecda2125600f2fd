"""Single source of truth for the extrapbench version number."""

__version__ = "0.1.0"
