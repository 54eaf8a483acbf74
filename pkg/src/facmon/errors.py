"""Error type shared by every service module.

All failures carry a stable machine-readable ``code`` (e.g. ``DUPLICATE_BARCODE``,
``ILLEGAL_TRANSITION``); the HTTP layer maps codes to statuses, the CLI prints
them to stderr. Keeping a single exception type with a code field avoids a
class-per-error explosion while still letting callers dispatch on the code.
"""

from __future__ import annotations

from typing import Any, Mapping


class DomainError(Exception):
    """A rule violation or lookup failure raised by a service operation."""

    def __init__(self, code: str, message: str, details: Mapping[str, Any] | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.details = dict(details) if details else {}

    def __repr__(self) -> str:  # pragma: no cover
        return f"DomainError({self.code!r}, {self.message!r})"


def bail(code: str, message: str, **details: Any) -> "DomainError":
    """Build a DomainError; use as ``raise bail("UNKNOWN_ITEM", ...)``."""
    return DomainError(code, message, details or None)
