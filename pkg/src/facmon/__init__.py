"""facmon: facilities asset registry, monitoring workflow, and reporting."""

__version__ = "0.1.0"
