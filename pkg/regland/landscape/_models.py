import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..hamiltonian import Grid1D, Potential


class LandscapeSolution(BaseModel):
    """
    LandscapeSolution is the solution of (-Δ+V)v = f with Dirichlet conditions,
    together with the f and V it was computed from. For f ≡ 1 it is the
    landscape function u.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: Grid1D

    values: np.ndarray
    """
    Values are v on the interior nodes.
    """

    rhs: np.ndarray
    """
    Rhs is the right-hand side f the solve used.
    """

    potential: Potential

    residual: float = Field(ge=0.0)
    """
    Residual is ‖Hv - f‖_∞ measured right after the solve.
    """

    @field_validator("values", "rhs", mode="before")
    @classmethod
    def freeze_arrays(cls, values):
        array = np.array(values, dtype=float, copy=True)
        array.setflags(write=False)
        return array

    @property
    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))
