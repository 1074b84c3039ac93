from typing import Optional


class Su3HoloError(Exception):
    """Base class for every error raised by the library."""


class InvalidInputError(Su3HoloError, ValueError):
    pass


class DimensionMismatchError(InvalidInputError):
    pass


class GroupElementError(InvalidInputError):
    """Matrix fails the unitarity or unit-determinant check."""


class DegenerateInputError(Su3HoloError, ValueError):
    """A simple spectrum was required but the point sits on Σ₁₂, Σ₂₃ or the origin."""

    def __init__(self, message: str, degeneracy=None):
        super().__init__(message)
        self.degeneracy = degeneracy


class ResolutionError(Su3HoloError):
    """Consecutive loop samples overlap too weakly for the tracked level."""


class QuadratureError(Su3HoloError):
    pass


class DescriptorError(Su3HoloError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class UsageError(Su3HoloError):
    """Command line could not be parsed."""
