"""tagrot - tagged triangulations, flips, mutation and the tagged rotation of marked surfaces."""

try:
    from importlib.metadata import version

    __version__ = version("tagrot")
except Exception:
    __version__ = "0.1.0"

__all__ = ["__version__"]
