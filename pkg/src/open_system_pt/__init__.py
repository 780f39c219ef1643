"""Process-tensor simulation of open quantum systems with compressed environments."""

__version__ = "0.1.0"
