from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ._exceptions import FieldValueError, GridMismatchError


def _frozen_array(values) -> np.ndarray:
    array = np.array(values, dtype=float, copy=True)
    if array.ndim != 1:
        raise FieldValueError(f"expected a 1-D vector, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise FieldValueError("vector contains NaN or infinite entries")
    array.setflags(write=False)
    return array


class Grid1D(BaseModel):
    """
    Grid1D is the uniform discretization of Ω = (0, 1) with n interior nodes
    x_i = i/(n+1), i = 1..n. The boundary nodes x_0 = 0 and x_{n+1} = 1 carry
    the Dirichlet condition and are not stored.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=3)
    """
    N is the number of interior nodes.
    """

    @property
    def h(self) -> float:
        """Spacing 1/(n+1)."""
        return 1.0 / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        """Interior node coordinates, strictly increasing."""
        return np.arange(1, self.n + 1, dtype=float) / (self.n + 1)

    def index_of(self, x: float) -> int:
        """0-based index of the node closest to x."""
        return int(np.clip(round(x * (self.n + 1)) - 1, 0, self.n - 1))

    def boundary_distance(self) -> np.ndarray:
        """Distance of every node to ∂Ω."""
        nodes = self.nodes
        return np.minimum(nodes, 1.0 - nodes)

    def __str__(self):
        return f"Grid1D(n={self.n}, h={self.h:.6g})"


class FieldProvenance(BaseModel):
    """Where a grid field came from; enough to regenerate it."""

    model_config = ConfigDict(frozen=True)

    generator: str = "explicit"
    """
    Generator is the name of the routine that produced the values.
    """

    rng: Optional[str] = None
    """
    RNG is the bit generator algorithm, for seeded fields.
    """

    seed: Optional[int] = None

    intervals: Optional[int] = None
    """
    Intervals is the number of constant blocks M of a piecewise potential.
    """

    vmax: Optional[float] = None
    """
    Vmax is the upper end of the uniform value range.
    """


class GridField(BaseModel):
    """
    GridField is a real vector attached to a Grid1D, one value per interior node.
    The values are copied and made read-only on construction.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: Grid1D

    values: np.ndarray

    provenance: FieldProvenance = FieldProvenance()

    @field_validator("values", mode="before")
    @classmethod
    def freeze_values(cls, values):
        return _frozen_array(values)

    @model_validator(mode="after")
    def check_length(self):
        if self.values.shape[0] != self.grid.n:
            raise GridMismatchError(self.grid.n, self.values.shape[0], "values")
        return self

    def __len__(self):
        return self.grid.n

    @property
    def sup(self) -> float:
        """Sup norm."""
        return float(np.max(np.abs(self.values)))


class Potential(GridField):
    """
    Potential is the nonnegative potential V on the grid, in units of length⁻².
    """

    @model_validator(mode="after")
    def check_sign(self):
        if np.any(self.values < 0):
            raise FieldValueError("potential must be nonnegative everywhere")
        return self

    def shifted(self, c: float) -> "Potential":
        """V + c, with c ≥ -min V."""
        return Potential(grid=self.grid, values=self.values + c)


class SourceTerm(GridField):
    """
    SourceTerm is the strictly positive right-hand side f of (-Δ+V)v = f.
    """

    @model_validator(mode="after")
    def check_sign(self):
        if np.any(self.values <= 0):
            raise FieldValueError("source term must be strictly positive")
        return self


class TridiagonalOperator(BaseModel):
    """
    TridiagonalOperator is the symmetric discrete Hamiltonian -Δ_h + V with
    Dirichlet conditions: diag_i = 2/h² + V_i and offdiag = -1/h².
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    diag: np.ndarray
    """
    Diag is the main diagonal, n entries.
    """

    offdiag: np.ndarray
    """
    Offdiag is the sub/super diagonal, n-1 nonzero entries.
    """

    h: float = Field(gt=0.0)
    """
    H is the grid spacing the operator was assembled on.
    """

    @field_validator("diag", "offdiag", mode="before")
    @classmethod
    def freeze_values(cls, values):
        return _frozen_array(values)

    @model_validator(mode="after")
    def check_shape(self):
        if self.offdiag.shape[0] != self.diag.shape[0] - 1:
            raise GridMismatchError(self.diag.shape[0] - 1, self.offdiag.shape[0], "offdiag")
        if np.any(self.offdiag == 0):
            raise FieldValueError("operator must be irreducible (all offdiag nonzero)")
        return self

    @property
    def n(self) -> int:
        return int(self.diag.shape[0])

    @property
    def potential_values(self) -> np.ndarray:
        """V recovered from the diagonal."""
        return self.diag - 2.0 / self.h**2

    def gershgorin(self) -> tuple[float, float]:
        """Interval containing the whole spectrum."""
        radius = np.zeros(self.n)
        radius[:-1] += np.abs(self.offdiag)
        radius[1:] += np.abs(self.offdiag)
        return float(np.min(self.diag - radius)), float(np.max(self.diag + radius))

    def as_banded(self) -> np.ndarray:
        """(3, n) matrix in the layout scipy.linalg.solve_banded expects."""
        ab = np.zeros((3, self.n))
        ab[0, 1:] = self.offdiag
        ab[1, :] = self.diag
        ab[2, :-1] = self.offdiag
        return ab

    def as_upper_banded(self) -> np.ndarray:
        """(2, n) upper form for scipy.linalg.solveh_banded."""
        ab = np.zeros((2, self.n))
        ab[0, 1:] = self.offdiag
        ab[1, :] = self.diag
        return ab
