from __future__ import annotations

from ..utils._exceptions import InvalidInputError


class GridSizeError(InvalidInputError):
    """Raised when a grid is requested with fewer than three interior nodes."""

    module = "hamiltonian"

    def __init__(self, n: int):
        super().__init__(
            f"""
            Grid needs at least 3 interior nodes, got n={n}, Possible ways to fix this:
            - Use n ≥ 3; the reference experiments use n=3000.
            """
        )


class GridMismatchError(InvalidInputError):
    """Raised when a vector does not live on the grid it is combined with."""

    module = "hamiltonian"

    def __init__(self, expected: int, got: int, what: str = "vector"):
        super().__init__(
            f"""
            {what} has length {got} but the grid has {expected} interior nodes, Possible ways to fix this:
            - Build every field on the same Grid1D.
            - Check that CSV inputs were written for the same n.
            """
        )


class FieldValueError(InvalidInputError):
    """Raised when a grid field violates its sign or range contract."""

    module = "hamiltonian"
