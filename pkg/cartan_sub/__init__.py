"""Moving-frame engine for structure-preserving submersions."""

__version__ = "1.0.0"
