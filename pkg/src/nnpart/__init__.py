"""Online nearest-neighbor-partition learning engine and simulation harness."""

__version__ = "0.1.0"
