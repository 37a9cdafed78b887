"""Exception types shared across the toolkit.

Every error carries a short machine-readable ``code`` (e.g. ``UNKNOWN_VERTEX``)
so the CLI and tests can match on it without parsing messages.
"""

from __future__ import annotations


class CrosskitError(Exception):
    code = "ERROR"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class GraphError(CrosskitError):
    """Bad graph input: unknown vertices, duplicate labels, empty part lists."""


class SpecParseError(CrosskitError):
    """Malformed graph spec text. ``offset`` is the byte offset of the problem."""

    code = "PARSE_ERROR"

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class SchemaError(CrosskitError):
    """Drawing file does not conform to the .crdraw.json schema.

    ``path`` points at the offending key, e.g. ``crossings[2].edges``.
    """

    code = "SCHEMA_ERROR"

    def __init__(self, message: str, path: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class SurgeryError(CrosskitError):
    """A drawing operation was given an unrealizable instruction."""


class DegenerateLayoutError(CrosskitError):
    """Geometric layout violates general position; ``witness`` names the points."""

    code = "DEGENERATE_LAYOUT"

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
