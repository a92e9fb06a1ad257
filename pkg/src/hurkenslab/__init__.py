"""hurkenslab: a configurable PTS proof kernel and Hurkens-paradox laboratory."""

__version__ = "0.1.0"
