"""Rectangle-free c-colorings of grids: constructions, bounds, exact search and obstruction sets."""

__version__ = "0.1.0"
