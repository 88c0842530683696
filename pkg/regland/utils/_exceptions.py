from __future__ import annotations


class RegLandError(Exception):
    """Base class for every error raised by regland."""

    message: str

    module: str = "regland"

    def __init__(self, message: str):
        self.message = message
        super().__init__(self.message)

    def qualified(self) -> str:
        """
        Message prefixed with the module that raised it, used by the CLI.
        """
        return f"[{self.module}] {self.message.strip()}"


class InvalidInputError(RegLandError, ValueError):
    """Raised when an argument is outside the contract of an operation."""


class DomainError(RegLandError, ValueError):
    """Raised when a mathematically undefined value is requested."""


class NumericalError(RegLandError, ArithmeticError):
    """Raised when a computation fails to reach its accuracy or sign guarantees."""


class DependencyError(RegLandError):
    """Raised when an upstream artifact required by a step is missing."""
