from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..hamiltonian import Grid1D
from ..kernel import KernelSpec

BoundaryPolicy = Literal["reflect", "zero"]
"""
How a field is extended beyond Ω before convolving: half-sample even
reflection, or zero padding.
"""

KernelKind = Literal["regularizing", "gaussian"]
"""
Which profile is sampled: the time-averaged kernel k_t, or the heat kernel
g_t with variance 2t.
"""


def _frozen(values) -> np.ndarray:
    array = np.array(values, copy=True)
    array.setflags(write=False)
    return array


class DiscreteKernel(BaseModel):
    """
    DiscreteKernel is k_t (or g_t) sampled at the offsets j·h, |j| ≤ R, and
    rescaled so that Σ w_j·h = 1.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    spec: KernelSpec | None = None
    """
    Spec is the sampled kernel; None for the identity kernel at t = 0.
    """

    kind: KernelKind = "regularizing"

    h: float = Field(gt=0.0)
    """
    H is the grid spacing the kernel was sampled on.
    """

    offsets: np.ndarray
    """
    Offsets are the integer node offsets -R..R.
    """

    weights: np.ndarray
    """
    Weights are the renormalized samples w_j, in units of length⁻¹.
    """

    identity: bool = False
    """
    Identity is set when the kernel is too narrow for the grid and collapses to
    a single weight 1/h.
    """

    raw_mass: float = 1.0
    """
    RawMass is Σ w_j·h before renormalization.
    """

    tail_mass: float = 0.0
    """
    TailMass is the continuum mass of the kernel beyond R·h.
    """

    @field_validator("offsets", "weights", mode="before")
    @classmethod
    def freeze_arrays(cls, values):
        return _frozen(values)

    @property
    def radius(self) -> int:
        """R, the largest offset."""
        return int(self.offsets[-1])

    @property
    def truncation_radius(self) -> float:
        """R·h."""
        return self.radius * self.h

    @property
    def taps(self) -> np.ndarray:
        """Weights times h, the coefficients of the discrete convolution."""
        return self.weights * self.h

    def second_moment(self) -> float:
        """Σ (jh)²·w_j·h."""
        return float(np.sum((self.offsets * self.h) ** 2 * self.taps))


class RegularizedField(BaseModel):
    """RegularizedField is V∗k_t on the grid, with the scale and policy used."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: Grid1D

    values: np.ndarray

    t: float = Field(ge=0.0)

    policy: BoundaryPolicy = "reflect"

    identity: bool = False

    @field_validator("values", mode="before")
    @classmethod
    def freeze_values(cls, values):
        return _frozen(np.asarray(values, dtype=float))
