import logging
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Literal, Optional

import tomli_w
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..regularize import BoundaryPolicy
from ..utils import io
from ._exceptions import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_OUTPUT_DIR = "artifacts"

GateName = Literal[
    "landscape-bound", "residual-identity", "localization", "generalized", "monte-carlo"
]

ALL_GATES = ["landscape-bound", "residual-identity", "localization", "generalized", "monte-carlo"]


def _default_output_dir() -> str:
    return os.getenv("REGLAND_OUTPUT_DIR", DEFAULT_OUTPUT_DIR)


class ExperimentConfig(BaseModel):
    """
    ExperimentConfig is everything a pipeline run depends on. It is a flat
    set of keys, read from and written to TOML.

    Example Usage:
        ```toml
        seed = 7
        n = 3000
        intervals = 20
        vmax = 1e5
        ts = [0.001]
        k = 5
        ```
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = "experiment"

    seed: int = Field(default=0, ge=0, lt=2**63)
    """
    Seed addresses every random stream of the run.
    """

    n: int = Field(default=3000, ge=3)
    """
    N is the number of interior grid nodes.
    """

    potential: Literal["piecewise", "file"] = "piecewise"

    intervals: int = Field(default=20, ge=1)
    """
    Intervals is the number M of constant blocks of the random potential.
    """

    vmax: float = Field(default=1e5, ge=0.0, allow_inf_nan=False)
    """
    Vmax is the upper end of the uniform distribution of block values.
    """

    potential_file: Optional[str] = None
    """
    PotentialFile is a CSV with a `value` column, used when potential = "file".
    """

    rhs: Literal["constant", "modulated", "file"] = "constant"
    """
    Rhs selects the right-hand side f of the generalized landscape equation.
    """

    rhs_file: Optional[str] = None

    t_policy: Literal["explicit", "inverse-mean"] = "explicit"
    """
    TPolicy "inverse-mean" replaces ts by the single scale 1/mean(V), clamped.
    """

    ts: list[float] = Field(default_factory=lambda: [1e-3])
    """
    Ts are the regularization scales; the first one drives predictions and plots.
    """

    k: int = Field(default=5, ge=1)
    """
    K is the number of lowest eigenpairs.
    """

    policy: BoundaryPolicy = "reflect"

    tolerance_nodes: int = Field(default=60, ge=0)
    """
    ToleranceNodes is the largest peak distance counted as a localization match.
    """

    sweep: list[float] = Field(default_factory=list)
    """
    Sweep is the list of scales of the residual sweep; empty disables it.
    """

    monte_carlo: bool = False
    """
    MonteCarlo enables the Feynman-Kac stage.
    """

    paths: int = Field(default=100_000, ge=1)

    substeps: int = Field(default=64, ge=8)

    mc_t: float = Field(default=1e-4, gt=0.0)
    """
    McT is the horizon of the Monte Carlo checks.
    """

    alpha: float = Field(default=0.3, gt=0.0, lt=1.0)
    """
    Alpha is the target t·max V_t of the Khasminskii check.
    """

    gates: list[GateName] = Field(default_factory=lambda: list(ALL_GATES))
    """
    Gates are the acceptance gates that decide the exit code of `run`.
    """

    output_dir: str = Field(default_factory=_default_output_dir)

    @field_validator("ts", "sweep")
    @classmethod
    def check_scales(cls, values: list[float]) -> list[float]:
        if any(not value > 0 for value in values):
            raise ValueError("scales must be positive")
        return values

    @model_validator(mode="after")
    def check_sources(self):
        if self.potential == "file" and not self.potential_file:
            raise ValueError("potential = 'file' needs potential_file")
        if self.rhs == "file" and not self.rhs_file:
            raise ValueError("rhs = 'file' needs rhs_file")
        if self.potential == "piecewise" and self.intervals > self.n:
            raise ValueError(f"intervals={self.intervals} exceeds n={self.n}")
        if self.t_policy == "explicit" and not self.ts:
            raise ValueError("t_policy = 'explicit' needs at least one scale in ts")
        return self

    @property
    def directory(self) -> Path:
        return Path(self.output_dir)

    def to_toml(self) -> str:
        return tomli_w.dumps(self.model_dump(mode="json", exclude_none=True))


def parse_config(data: dict) -> ExperimentConfig:
    """Validate a config mapping; the [run] table of a manifest is ignored."""
    data = {key: value for key, value in data.items() if key != "run"}
    return ExperimentConfig(**data)


def load_config(path: Path) -> ExperimentConfig:
    """
    Read a config (or a manifest, which embeds one) from TOML.

    Raises:
        ConfigError: the file is missing or not TOML.
        pydantic.ValidationError: a value is out of range.
    """
    try:
        with open(path, "rb") as handle:
            data = tomllib.load(handle)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc

    config = parse_config(data)
    logger.debug(f"Loaded config {config.name} from {path}")
    return config


def save_config(config: ExperimentConfig, path: Path) -> Path:
    return io.write_text_atomic(path, config.to_toml())

