"""negokit: deterministic multi-issue bargaining engine, simulator, and coach."""

__version__ = "0.1.0"
