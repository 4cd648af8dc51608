"""Shared exception types."""


class FeasibilityError(RuntimeError):
    """A requested computation exceeds its enumeration or size budget."""
