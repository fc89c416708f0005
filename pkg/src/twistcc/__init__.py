"""Color codes with charge- and color-permuting twists, holes and braiding."""

__version__ = "0.1.0"
