"""
Error types shared by every workbench module.
The CLI maps them onto exit codes (1 invalid input, 2 capacity, 3 consistency).
"""
from typing import Optional


class SodLabError(Exception):
    """Base class for workbench errors."""

    exit_code = 1


class InvalidInputError(SodLabError, ValueError):
    """Rejected input: malformed tokens, dimension mismatch, failed axioms."""

    exit_code = 1

    def __init__(self, message: str, axiom: Optional[str] = None, detail: Optional[str] = None):
        super().__init__(message)
        self.axiom = axiom
        self.detail = detail


class CapacityError(SodLabError):
    """A configured size cap was exceeded."""

    exit_code = 2


class WindowTooSmallError(CapacityError):
    """No candidate found inside the X(2) search window."""

    def __init__(self, message: str, window: int):
        super().__init__(f"{message} (window |m| <= {window}); enlarge the window and retry")
        self.window = window


class ConsistencyError(SodLabError, AssertionError):
    """An internal invariant failed; indicates a bug, never bad input."""

    exit_code = 3
