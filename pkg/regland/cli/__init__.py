from ._exceptions import ConfigError, MissingArtifactError, StageInputError
from ._models import ExperimentEvents, ExperimentState, GateResult, StageRecord
from .commands import build_parser, main, parse_sweep
from .config import ExperimentConfig, load_config, parse_config, save_config
from .experiment import Experiment, run, write_kernel_profiles
from .report import write_report

__all__ = [
    "main",
    "build_parser",
    "parse_sweep",
    "run",
    "Experiment",
    "ExperimentConfig",
    "ExperimentEvents",
    "ExperimentState",
    "GateResult",
    "StageRecord",
    "load_config",
    "save_config",
    "parse_config",
    "write_report",
    "write_kernel_profiles",
    "MissingArtifactError",
    "ConfigError",
    "StageInputError",
]

# Cleanup docs of unexported modules
_module = dir()
NOT_IN_ALL = [m for m in _module if m not in __all__]

__pdoc__ = {}

for n in NOT_IN_ALL:
    __pdoc__[n] = False
