"""Structured errors for machine-readable failures.

Every error carries:
- error: category (malformed, invalid_order, precondition, not_extensible,
  extension_failed, too_large)
- message: human readable summary
- details: list of ErrorDetail with code, message, field, hint

The same error object feeds the HTTP handler (status_code) and the CLI
(exit_code).
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict


@dataclass
class ErrorDetail:
    """A single problem."""
    code: str
    message: str
    field: str | None = None
    hint: str | None = None


@dataclass
class ErrorResponse:
    """Machine readable error payload."""
    error: str
    message: str
    details: list[ErrorDetail] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "error": self.error,
            "message": self.message,
            "details": [asdict(d) for d in self.details],
        }


class BookError(Exception):
    """Base exception for all workbench errors."""
    status_code: int = 500
    exit_code: int = 1
    error_type: str = "internal"

    def __init__(self, message: str, details: list[ErrorDetail] | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or []

    def to_response(self) -> ErrorResponse:
        return ErrorResponse(
            error=self.error_type,
            message=self.message,
            details=self.details,
        )


class MalformedInputError(BookError):
    """422 - input does not describe a well-formed graph, layout or embedding."""
    status_code = 422
    exit_code = 2
    error_type = "malformed"


class InvalidOrderError(BookError):
    """422 - generator argument out of range."""
    status_code = 422
    exit_code = 2
    error_type = "invalid_order"


class PreconditionError(BookError):
    """409 - operation not defined for this input."""
    status_code = 409
    exit_code = 1
    error_type = "precondition"


class NotExtensibleError(PreconditionError):
    """409 - embedding is not extensible (or the block is not a seed)."""
    error_type = "not_extensible"


class ExtensionFailedError(BookError):
    """409 - no alternation phase produced a valid embedding."""
    status_code = 409
    exit_code = 1
    error_type = "extension_failed"


class GraphTooLargeError(BookError):
    """413 - brute force refused above the vertex ceiling."""
    status_code = 413
    exit_code = 2
    error_type = "too_large"
