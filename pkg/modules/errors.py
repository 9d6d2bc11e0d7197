"""
Exception hierarchy shared by every module.
"""
from typing import Optional


class MinimalCodesError(Exception):
    """Base class for all toolkit errors."""


class PreconditionError(MinimalCodesError, ValueError):
    """An operation was called outside its domain."""

    def __init__(self, message: str, constraint: str = ""):
        super().__init__(message)
        self.constraint = constraint


class FieldMismatchError(PreconditionError):
    """Operands belong to different fields."""

    def __init__(self, message: str = "operands belong to different fields"):
        super().__init__(message, constraint="same-field")


class NonSpanningError(PreconditionError):
    """A point set lies in a proper subspace of its ambient space."""

    def __init__(self, rank: int, dimension: int):
        super().__init__(
            f"point set spans a subspace of rank {rank}, ambient rank is {dimension}",
            constraint="spanning",
        )
        self.rank = rank
        self.dimension = dimension


class EnumerationLimitError(MinimalCodesError):
    """An exhaustive scan would exceed the configured limit."""

    def __init__(self, what: str, count: int, limit: int):
        super().__init__(
            f"refusing to enumerate {count} {what}: limit is {limit} (raise it with --max-enum)"
        )
        self.what = what
        self.count = count
        self.limit = limit


class VerificationError(MinimalCodesError):
    """A computed object failed its own re-verification."""


class FormatError(MinimalCodesError, ValueError):
    """A text file could not be parsed."""

    def __init__(self, message: str, line: int, column: Optional[int] = None):
        location = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{location}: {message}")
        self.line = line
        self.column = column
