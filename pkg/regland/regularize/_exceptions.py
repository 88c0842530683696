from __future__ import annotations

from ..utils._exceptions import InvalidInputError


class KernelDimensionError(InvalidInputError):
    """Raised when a grid kernel is requested for d ≠ 1."""

    module = "regularize"

    def __init__(self, dimension: int):
        super().__init__(
            f"""
            Grid kernels are one-dimensional, got d={dimension}, Possible ways to fix this:
            - Use KernelSpec(dimension=1, ...) for grid convolutions.
            - Evaluate higher-dimensional kernels pointwise with regland.kernel.eval_kernel.
            """
        )


class InteriorWindowError(InvalidInputError):
    """Raised when a point is too close to ∂Ω for the scale t."""

    module = "regularize"

    def __init__(self, x: float, t: float, distance: float):
        super().__init__(
            f"""
            Point x={x:.6g} lies {distance:.3e} from the boundary, less than 5·√t = {5 * t**0.5:.3e}, Possible ways to fix this:
            - Pick a point further inside Ω.
            - Use a smaller scale t.
            """
        )
