"""Real-time Turing machine laboratory."""

__version__ = "0.1.0"
