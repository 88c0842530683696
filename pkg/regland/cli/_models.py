from typing import Any, Optional

from pydantic import BaseModel, ConfigDict


# ExperimentEvents holds the names of the events emitted by an Experiment.
class ExperimentEvents(str):
    StageStarted: str = "StageStarted"
    StageCompleted: str = "StageCompleted"
    ArtifactWritten: str = "ArtifactWritten"
    Gate: str = "Gate"
    Failed: str = "Failed"


class StageRecord(BaseModel):
    """Wall time of one pipeline stage."""

    name: str

    seconds: float = 0.0

    status: str = "running"


class GateResult(BaseModel):
    """
    GateResult is the verdict of one acceptance gate, returned by a listener of
    ExperimentEvents.Gate.
    """

    model_config = ConfigDict(frozen=True)

    name: str

    passed: bool

    detail: str = ""

    value: Optional[Any] = None


class ExperimentState(BaseModel):
    """
    ExperimentState holds the in-memory results of the stages run so far. The
    gates read it; every field is also backed by an artifact file.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    potential: Optional[Any] = None

    rhs: Optional[Any] = None

    pairs: list[Any] = []

    landscape: Optional[Any] = None

    generalized: Optional[Any] = None
    """
    Generalized is the solution v for a non-constant right-hand side.
    """

    effective: Optional[Any] = None
    """
    Effective is (f∗k_t)/v at the first scale.
    """

    regularized: dict[float, Any] = {}

    residuals: list[Any] = []

    sweeps: list[Any] = []

    matches: Optional[Any] = None

    envelopes: list[Any] = []

    mc_checks: list[Any] = []

    khasminskii: Optional[Any] = None

    expansion: Optional[Any] = None
