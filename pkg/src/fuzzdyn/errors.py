"""Shared exception types."""


class FuzzdynError(Exception):
    """Base class for all package errors."""


class InputError(FuzzdynError):
    """Malformed, inconsistent, or out-of-domain input."""


class BoundExceeded(FuzzdynError):
    """An enumeration or product would exceed a configured resource bound."""

    def __init__(self, what: str, size: int, bound: int):
        super().__init__(f"{what}: size {size} exceeds bound {bound}")
        self.what = what
        self.size = size
        self.bound = bound
