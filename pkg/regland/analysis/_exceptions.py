from __future__ import annotations

from ..utils._exceptions import InvalidInputError


class EmptyWindowError(InvalidInputError):
    """Raised when no node lies at distance ≥ 5√t from ∂Ω."""

    module = "analysis"

    def __init__(self, t: float):
        super().__init__(
            f"""
            No interior node is 5·√t = {5 * t**0.5:.3e} away from the boundary, Possible ways to fix this:
            - Use a smaller scale; the window is empty once t ≥ 0.01.
            """
        )


class SweepError(InvalidInputError):
    """Raised for residual sweeps with unusable scale lists."""

    module = "analysis"


class PeakError(InvalidInputError):
    """Raised for invalid peak detection parameters."""

    module = "analysis"
