from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

# Width of the acceptance band in standard errors.
SIGMAS = 3.0

# Relative slack for estimates that are deterministic up to rounding.
ROUNDING = 1e-12


class PathEnsemble(BaseModel):
    """
    PathEnsemble holds N discretized Brownian paths ω started at x and run to
    time t in m equal substeps, with increments of variance 2·t/m.

    Positions are stored unabsorbed; `survived` marks the paths whose substep
    endpoints all stayed inside (0, 1). Killed functionals multiply by it.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    start: float = Field(gt=0.0, lt=1.0)

    horizon: float = Field(gt=0.0)
    """
    Horizon is the final time t.
    """

    substeps: int = Field(ge=8)

    count: int = Field(ge=1)

    seed: int = Field(ge=0)

    positions: np.ndarray
    """
    Positions is the (N, m+1) array ω(s_j), s_j = j·t/m; column 0 is x.
    """

    survived: np.ndarray
    """
    Survived is the boolean mask of paths never found outside Ω.
    """

    @field_validator("positions", "survived", mode="before")
    @classmethod
    def freeze_arrays(cls, values):
        array = np.array(values, copy=True)
        array.setflags(write=False)
        return array

    @property
    def step(self) -> float:
        """Δs = t/m."""
        return self.horizon / self.substeps

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.substeps + 1) * self.step

    @property
    def endpoints(self) -> np.ndarray:
        """ω(t) for every path."""
        return self.positions[:, -1]


class MCEstimate(BaseModel):
    """MCEstimate is a sample mean with its standard error."""

    model_config = ConfigDict(frozen=True)

    mean: float

    stderr: float = Field(ge=0.0)
    """
    Stderr is the sample standard deviation over √N.
    """

    n_effective: int = Field(ge=0)
    """
    NEffective is the number of samples that carried weight (surviving paths
    for killed functionals).
    """

    @classmethod
    def from_samples(cls, samples: np.ndarray, n_effective: Optional[int] = None) -> "MCEstimate":
        samples = np.asarray(samples, dtype=float)
        count = samples.shape[0]
        stderr = float(np.std(samples, ddof=1) / np.sqrt(count)) if count > 1 else 0.0
        return cls(
            mean=float(np.mean(samples)),
            stderr=stderr,
            n_effective=count if n_effective is None else n_effective,
        )

    def __str__(self):
        return f"{self.mean:.8g} ± {self.stderr:.2g} (n={self.n_effective})"


class MCCheck(BaseModel):
    """
    MCCheck compares an estimate to a deterministic target:
    passed iff |mean - target| ≤ 3·stderr + allowance, and, when a bias bound
    is given, allowance ≤ bias_bound.
    """

    model_config = ConfigDict(frozen=True)

    name: str

    x: float

    t: float

    estimate: MCEstimate

    target: float

    allowance: float = Field(ge=0.0)
    """
    Allowance is the discretization bias added to 3σ.
    """

    bias_bound: Optional[float] = Field(default=None, ge=0.0)
    """
    BiasBound caps the allowance for checks whose allowance is measured
    (the gap between the left-point mirror and the target) rather than given
    by a formula.
    """

    passed: bool

    @classmethod
    def judge(
        cls,
        name: str,
        x: float,
        t: float,
        estimate: MCEstimate,
        target: float,
        allowance: float,
        bias_bound: Optional[float] = None,
    ) -> "MCCheck":
        slack = ROUNDING * abs(target)
        bounded = True
        if bias_bound is not None:
            bias_bound = bias_bound + slack
            bounded = allowance <= bias_bound
        allowance = allowance + slack
        passed = bounded and abs(estimate.mean - target) <= SIGMAS * estimate.stderr + allowance
        return cls(
            name=name,
            x=x,
            t=t,
            estimate=estimate,
            target=target,
            allowance=allowance,
            bias_bound=bias_bound,
            passed=passed,
        )

    @property
    def deviation(self) -> float:
        return abs(self.estimate.mean - self.target)


class KhasminskiiReport(BaseModel):
    """
    KhasminskiiReport compares sup_x E_x exp(∫₀ᵗ V) to 1/(1-α), with α the
    regularized proxy t·max V_t. When α ≥ 1 the check is skipped and `notice`
    explains why.
    """

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(ge=0.0)

    t: float

    mc_sup: Optional[float] = None

    stderr: Optional[float] = None

    argmax: Optional[float] = None
    """
    Argmax is the start point where the supremum was attained.
    """

    bound: Optional[float] = None

    passed: Optional[bool] = None
    """
    Passed is None when the check was skipped.
    """

    notice: str = ""

    @property
    def skipped(self) -> bool:
        return self.passed is None


class ExpansionReport(BaseModel):
    """
    ExpansionReport compares E exp(-∫₀ᵗ V) with its first- and second-order
    expansions 1 - t·V_t(x) and 1 - t·V_t(x) + ½·E(∫V)².
    """

    model_config = ConfigDict(frozen=True)

    x: float

    t: float

    estimate: MCEstimate

    first_order: float

    second_order: float

    @property
    def first_order_error(self) -> float:
        return abs(self.estimate.mean - self.first_order)

    @property
    def second_order_error(self) -> float:
        return abs(self.estimate.mean - self.second_order)
