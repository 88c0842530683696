from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ._exceptions import SweepError


def _frozen(values, dtype=float) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


class ResidualEntry(BaseModel):
    """
    ResidualEntry is the residual R of one regularized equation at one scale t,
    measured on the interior window.
    """

    model_config = ConfigDict(frozen=True)

    t: float = Field(gt=0.0)

    sup_norm: float = Field(ge=0.0)
    """
    SupNorm is max |R| over the window.
    """

    weighted_norm: float = Field(ge=0.0)
    """
    WeightedNorm is max |R|·|w|/‖w‖_∞ over the window, w the solution
    (φ or u) the residual was formed with.
    """

    identity_error: float = Field(ge=0.0)
    """
    IdentityError is max |R - (V_t - V)·w| over the window, relative to the
    rounding scale ‖|H|·|w|‖_∞ + |c|·‖w‖_∞ of the discrete equation.
    """

    window_size: int = Field(ge=1)


class ResidualReport(BaseModel):
    """
    ResidualReport collects residual entries over a decreasing list of scales
    with the least-squares log-log slope of the sup norms.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: Literal["eigen", "landscape"]

    entries: list[ResidualEntry]

    window: np.ndarray
    """
    Window is the boolean node mask dist(x, ∂Ω) ≥ 5√t_max shared by all entries.
    """

    slope: Optional[float] = None
    """
    Slope is None when fewer than five norms are positive.
    """

    weighted_slope: Optional[float] = None

    @field_validator("window", mode="before")
    @classmethod
    def freeze_window(cls, values):
        return _frozen(values, bool)

    @model_validator(mode="after")
    def check_order(self):
        ts = [entry.t for entry in self.entries]
        if any(a <= b for a, b in zip(ts, ts[1:])):
            raise SweepError("scales of a residual report must be strictly decreasing")
        if not np.any(self.window):
            raise SweepError("residual window is empty")
        return self

    @property
    def ts(self) -> np.ndarray:
        return np.array([entry.t for entry in self.entries])

    @property
    def norms(self) -> np.ndarray:
        return np.array([entry.sup_norm for entry in self.entries])

    @property
    def weighted_norms(self) -> np.ndarray:
        return np.array([entry.weighted_norm for entry in self.entries])


class PeakSet(BaseModel):
    """
    PeakSet is the set of strict local extrema of a field whose prominence
    reaches a threshold.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    mode: Literal["maxima", "minima"] = "maxima"

    indices: np.ndarray
    """
    Indices are 0-based node numbers, ascending.
    """

    prominences: np.ndarray
    """
    Prominences are the heights above the highest connecting saddle, one per index.
    """

    prominence: float = Field(gt=0.0)
    """
    Prominence is the threshold used.
    """

    @field_validator("indices", mode="before")
    @classmethod
    def freeze_indices(cls, values):
        return _frozen(np.asarray(values, dtype=np.int64), np.int64)

    @field_validator("prominences", mode="before")
    @classmethod
    def freeze_prominences(cls, values):
        return _frozen(values)

    @model_validator(mode="before")
    @classmethod
    def sort_by_node(cls, data):
        if isinstance(data, dict) and "indices" in data and "prominences" in data:
            indices = np.asarray(data["indices"], dtype=np.int64)
            prominences = np.asarray(data["prominences"], dtype=float)
            if indices.shape != prominences.shape:
                raise ValueError(f"{indices.shape[0]} indices but {prominences.shape[0]} prominences")
            order = np.argsort(indices, kind="stable")
            data = {**data, "indices": indices[order], "prominences": prominences[order]}
        return data

    def __len__(self):
        return int(self.indices.shape[0])

    def top(self, k: int) -> np.ndarray:
        """The k most prominent peaks, ascending by node."""
        order = np.argsort(-self.prominences, kind="stable")[:k]
        return np.sort(self.indices[order])

    def nearest(self, node: int) -> Optional[int]:
        """Distance in nodes from `node` to the closest peak, None when empty."""
        if len(self) == 0:
            return None
        return int(np.min(np.abs(self.indices - node)))


class MatchRow(BaseModel):
    """Distances from one eigenfunction peak to the nearest predicted location."""

    model_config = ConfigDict(frozen=True)

    index: int

    peak: int
    """
    Peak is the 0-based node of max |φ|.
    """

    distances: dict[str, Optional[int]]


class LocalizationReport(BaseModel):
    """
    LocalizationReport scores effective-potential predictors by how many
    eigenfunction peaks lie within `tolerance` nodes of a predicted location.
    """

    model_config = ConfigDict(frozen=True)

    tolerance: int = Field(ge=0)

    rows: list[MatchRow]

    counts: dict[str, int]

    def matched(self, predictor: str) -> list[bool]:
        return [
            row.distances[predictor] is not None and row.distances[predictor] <= self.tolerance
            for row in self.rows
        ]


class EnvelopeReport(BaseModel):
    """
    EnvelopeReport is the fitted decay envelope log|φ(r)| ≤ C - ρ(r0, r).
    """

    model_config = ConfigDict(frozen=True)

    offset: float
    """
    Offset is the smallest C for which the envelope holds on the fitted nodes.
    """

    violation_fraction: float = Field(ge=0.0, le=1.0)

    nodes_used: int = Field(ge=0)

    r0: int


class EnvelopeComparison(BaseModel):
    """Envelope offsets for w = 1/u and w = V_t side by side."""

    model_config = ConfigDict(frozen=True)

    landscape: EnvelopeReport

    regularized: EnvelopeReport

    @property
    def relative_difference(self) -> float:
        a, b = self.landscape.offset, self.regularized.offset
        scale = max(abs(a), abs(b))
        return 0.0 if scale == 0 else abs(a - b) / scale

    @property
    def within_30_percent(self) -> bool:
        return self.relative_difference <= 0.3
