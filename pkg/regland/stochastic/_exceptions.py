from __future__ import annotations

from ..utils._exceptions import DomainError, InvalidInputError


class PathParameterError(InvalidInputError):
    """Raised for path ensembles outside x ∈ (0,1), t > 0, m ≥ 8, N ≥ 1."""

    module = "stochastic"


class EnsembleMismatchError(InvalidInputError):
    """Raised when an ensemble was sampled for another start point or horizon."""

    module = "stochastic"

    def __init__(self, what: str, expected: float, got: float):
        super().__init__(
            f"""
            Ensemble {what} is {got:.6g} but the check needs {expected:.6g}, Possible ways to fix this:
            - Sample the ensemble with the same start node and horizon as the check.
            """
        )


class ScaleSelectionError(DomainError):
    """Raised when no scale t can reach the requested α."""

    module = "stochastic"
