from __future__ import annotations


class InfoshareError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(InfoshareError, ValueError):
    """A value violates a documented range or invariant."""

    def __init__(self, field: str, message: str) -> None:
        self.field = field
        super().__init__(f"{field}: {message}")


class FormatError(InfoshareError, ValueError):
    """A document could not be parsed against its schema."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
