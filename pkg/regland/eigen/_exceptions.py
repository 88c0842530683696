from __future__ import annotations

from ..utils._exceptions import InvalidInputError, NumericalError


class EigenCountError(InvalidInputError):
    """Raised when k is outside [1, n]."""

    module = "eigen"

    def __init__(self, k: int, n: int):
        super().__init__(
            f"""
            Requested k={k} eigenpairs from an operator of size n={n}, Possible ways to fix this:
            - Ask for 1 ≤ k ≤ n eigenpairs.
            """
        )


class ZeroVectorError(InvalidInputError):
    """Raised when the Rayleigh quotient of the zero vector is requested."""

    module = "eigen"

    def __init__(self):
        super().__init__("Rayleigh quotient is undefined for the zero vector")


class EigenConvergenceError(NumericalError):
    """Raised when inverse iteration fails for one eigenpair after all restarts."""

    module = "eigen"

    index: int

    def __init__(self, index: int, residual: float, restarts: int):
        self.index = index
        super().__init__(
            f"""
            Inverse iteration for eigenpair {index} did not converge after {restarts} restarts (residual {residual:.3e}), Possible ways to fix this:
            - Check the potential for NaN or extreme values; the operator must be irreducible.
            - Request fewer eigenpairs if the spectrum near index {index} is extremely clustered.
            """
        )
