"""Exception types shared across the package."""

from __future__ import annotations


class EmbthickError(Exception):
    """Base class for all package errors."""


class EmbeddingError(EmbthickError):
    """Malformed rotation system or invalid surgery request."""


class DiskConstructionError(EmbthickError):
    """The spanning-disk builder could not make progress."""

    def __init__(self, message: str, vertex: int | None = None) -> None:
        super().__init__(message)
        self.vertex = vertex


class DecompositionError(EmbthickError):
    """A pipeline could not produce a certified decomposition."""

    def __init__(self, message: str, diagnostics: dict | None = None) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class SearchTimeout(EmbthickError):
    """A search ran past its deadline."""


class FormatError(EmbthickError):
    """Input file could not be parsed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
