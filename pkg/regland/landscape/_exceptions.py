from __future__ import annotations

from ..utils._exceptions import InvalidInputError, NumericalError


class NonPositiveSourceError(InvalidInputError):
    """Raised when the right-hand side has an entry ≤ 0."""

    module = "landscape"

    def __init__(self, count: int):
        super().__init__(
            f"""
            Right-hand side has {count} entries ≤ 0, Possible ways to fix this:
            - Clamp f below at a small positive value (the modulated rhs uses 1e-12).
            - Use the constant rhs f ≡ 1 for the classical landscape function.
            """
        )


class LandscapePositivityError(NumericalError):
    """Raised when a solution that must be positive is not."""

    module = "landscape"

    def __init__(self, count: int, minimum: float):
        super().__init__(
            f"""
            Landscape solution has {count} entries ≤ 0 (min {minimum:.3e}), Possible ways to fix this:
            - Check that the potential is nonnegative; the maximum principle needs V ≥ 0.
            - Check the operator for overflow, e.g. a potential of order 1e300.
            """
        )
