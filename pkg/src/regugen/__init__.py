"""Structure constants, generation witnesses and counting checks for finite groups of Lie type."""

__version__ = "0.1.0"
