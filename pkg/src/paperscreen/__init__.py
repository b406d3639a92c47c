"""paperscreen: screening pipeline for problematic scientific papers."""

__version__ = "0.1.0"
