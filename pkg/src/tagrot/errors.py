"""Error definitions for tagrot."""

from enum import Enum
from typing import Any


class ErrorCategory(str, Enum):
    """Error categories for exit code mapping.

    Used by the CLI to map errors to process exit codes.
    """

    USAGE_ERROR = "usage"  # Caller handed in something invalid
    CHECK_ERROR = "check"  # A verification did not hold
    IO_ERROR = "io"  # Reading or writing an artifact failed
    INTERNAL_ERROR = "internal"  # Broken invariant inside the engine


_EXIT_CODES = {
    ErrorCategory.USAGE_ERROR: 2,
    ErrorCategory.CHECK_ERROR: 1,
    ErrorCategory.IO_ERROR: 3,
    ErrorCategory.INTERNAL_ERROR: 1,
}


class ErrorCode(str, Enum):
    """Numbered error codes, grouped by concern."""

    # Surface errors (1xxx)
    INVALID_SURFACE = "1001"
    UNSUPPORTED_SURFACE = "1002"
    SURFACE_MISMATCH = "1003"

    # Triangulation errors (2xxx)
    UNKNOWN_ARC = "2001"
    NOT_FLIPPABLE = "2002"
    INVALID_TRIANGULATION = "2003"

    # Matrix and seed errors (3xxx)
    INDEX_OUT_OF_RANGE = "3001"
    NOT_SKEW_SYMMETRIC = "3002"
    SIGN_COHERENCE_VIOLATION = "3003"
    NOT_MAXIMAL_GREEN = "3004"

    # Limit errors (4xxx)
    LIMIT_EXCEEDED = "4001"
    BOUND_EXCEEDED = "4002"

    # Document and IO errors (5xxx)
    IO_FAILURE = "5001"
    INVALID_DOCUMENT = "5002"

    INTERNAL_ERROR = "9000"


class TagrotError(Exception):
    """Base tagrot error with exit code mapping.

    Attributes:
        code: Error code (e.g., ErrorCode.NOT_FLIPPABLE)
        message: Human-readable error message
        category: Error category for exit code mapping
        exit_code: Process exit code used by the CLI
        data: Additional error data
    """

    def __init__(
        self,
        code: ErrorCode,
        message: str,
        data: dict[str, Any] | None = None,
        category: ErrorCategory = ErrorCategory.USAGE_ERROR,
    ):
        self.code = code
        self.message = message
        self.data = data or {}
        self.category = category
        self.exit_code = _EXIT_CODES[category]
        super().__init__(message)

    def to_dict(self) -> dict[str, Any]:
        """Convert error to dictionary for JSON serialization.

        Returns:
            Dict with error details
        """
        return {
            "code": self.code.value,
            "message": self.message,
            "category": self.category.value,
            "data": self.data,
        }


# Convenience factory functions
def invalid_surface(reason: str, surface: Any = None) -> TagrotError:
    return TagrotError(
        code=ErrorCode.INVALID_SURFACE,
        message=f"Invalid marked surface: {reason}",
        data={"reason": reason, "surface": str(surface) if surface is not None else None},
    )


def unsupported_surface(surface: Any, operation: str) -> TagrotError:
    """Surface topology is outside what an operation models."""
    return TagrotError(
        code=ErrorCode.UNSUPPORTED_SURFACE,
        message=f"{operation} does not support surface {surface}",
        data={"surface": str(surface), "operation": operation},
    )


def surface_mismatch(expected: Any, actual: Any) -> TagrotError:
    return TagrotError(
        code=ErrorCode.SURFACE_MISMATCH,
        message=f"Surface mismatch: expected {expected}, got {actual}",
        data={"expected": str(expected), "actual": str(actual)},
    )


def unknown_arc(arc: Any, known: list[Any] | None = None) -> TagrotError:
    return TagrotError(
        code=ErrorCode.UNKNOWN_ARC,
        message=f"Unknown arc: {arc}",
        data={"arc": str(arc), "known": [str(k) for k in known or []]},
    )


def not_flippable(arc: int, reason: str) -> TagrotError:
    """Ideal flip requested at an arc that has no flip."""
    return TagrotError(
        code=ErrorCode.NOT_FLIPPABLE,
        message=f"Arc {arc} is not flippable: {reason}",
        data={"arc": arc, "reason": reason},
    )


def invalid_triangulation(reason: str, details: dict[str, Any] | None = None) -> TagrotError:
    return TagrotError(
        code=ErrorCode.INVALID_TRIANGULATION,
        message=f"Invalid triangulation: {reason}",
        data={"reason": reason, **(details or {})},
    )


def index_out_of_range(index: int, size: int) -> TagrotError:
    return TagrotError(
        code=ErrorCode.INDEX_OUT_OF_RANGE,
        message=f"Index {index} out of range 1..{size}",
        data={"index": index, "size": size},
    )


def not_skew_symmetric(entry: tuple[int, int]) -> TagrotError:
    """Exchange matrix fails b_ij = -b_ji."""
    return TagrotError(
        code=ErrorCode.NOT_SKEW_SYMMETRIC,
        message=f"Matrix is not skew-symmetric at entry {entry}",
        data={"entry": list(entry)},
    )


def sign_coherence_violation(column: int, values: list[int], history: list[int]) -> TagrotError:
    return TagrotError(
        code=ErrorCode.SIGN_COHERENCE_VIOLATION,
        message=f"C-matrix column {column} is not sign-coherent: {values}",
        data={"column": column, "values": values, "history": history},
        category=ErrorCategory.INTERNAL_ERROR,
    )


def not_maximal_green(sequence: list[int], reason: str) -> TagrotError:
    return TagrotError(
        code=ErrorCode.NOT_MAXIMAL_GREEN,
        message=f"Sequence {sequence} is not a maximal green sequence: {reason}",
        data={"sequence": sequence, "reason": reason},
        category=ErrorCategory.CHECK_ERROR,
    )


def limit_exceeded(what: str, limit: int) -> TagrotError:
    """Exhaustive mode refused because the input is past its size guard."""
    return TagrotError(
        code=ErrorCode.LIMIT_EXCEEDED,
        message=f"{what} exceeds limit {limit}",
        data={"what": what, "limit": limit},
    )


def io_failure(path: str, error: str) -> TagrotError:
    return TagrotError(
        code=ErrorCode.IO_FAILURE,
        message=f"IO failure on {path}: {error}",
        data={"path": path, "error": error},
        category=ErrorCategory.IO_ERROR,
    )


def invalid_document(reason: str) -> TagrotError:
    return TagrotError(
        code=ErrorCode.INVALID_DOCUMENT,
        message=f"Invalid document: {reason}",
        data={"reason": reason},
    )


def internal_error(message: str, data: dict[str, Any] | None = None) -> TagrotError:
    return TagrotError(
        code=ErrorCode.INTERNAL_ERROR,
        message=message,
        data=data,
        category=ErrorCategory.INTERNAL_ERROR,
    )
