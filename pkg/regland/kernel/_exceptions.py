from __future__ import annotations

from ..utils._exceptions import DomainError, InvalidInputError, NumericalError


class KernelSingularError(DomainError):
    """Raised when k_t is evaluated at the origin in d ≥ 2."""

    module = "kernel"

    def __init__(self, dimension: int):
        super().__init__(
            f"""
            kernel singular at origin (d={dimension}), Possible ways to fix this:
            - Evaluate the kernel at r > 0; in d=2 it diverges like -log r, in d≥3 like r^(2-d).
            - Use the d=1 kernel if a finite value at r=0 is needed.
            """
        )


class KernelRadiusError(InvalidInputError):
    """Raised for a negative radius or a nonpositive quadrature tolerance."""

    module = "kernel"


class KernelQuadratureError(NumericalError):
    """Raised when the quadrature of the defining integral misses its tolerance."""

    module = "kernel"

    achieved: float

    def __init__(self, achieved: float, tolerance: float):
        self.achieved = achieved
        super().__init__(
            f"""
            Kernel quadrature did not converge (estimated error {achieved:.3e} > {tolerance:.3e}), Possible ways to fix this:
            - Loosen the tolerance; values far in the tail are below 1e-300 and carry no relative accuracy.
            - Evaluate at a radius closer to the kernel scale √t.
            """
        )
