"""cfleap — exact continued-fraction arithmetic under det ±2 transforms."""

__version__ = "0.1.0"
