"""Exception types shared across the package."""


class PointFormatError(ValueError):
    """Raised when a point file is malformed (ragged rows, non-numeric cells)."""


class EmptyInputError(ValueError):
    """Raised when an operation requires a nonempty cloud/collection and got none."""


class DegenerateClassError(ValueError):
    """Raised when a ratio scaling is requested for a class with zero death."""


class UndefinedConstantsError(ValueError):
    """Raised when K/q/q' are requested for two empty collections."""
