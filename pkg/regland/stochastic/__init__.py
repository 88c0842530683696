from ._exceptions import EnsembleMismatchError, PathParameterError, ScaleSelectionError
from ._models import (
    ExpansionReport,
    KhasminskiiReport,
    MCCheck,
    MCEstimate,
    PathEnsemble,
)
from .feynman_kac import (
    average_bias_bound,
    average_mirror,
    average_profile,
    avg_potential_mc,
    expansion_check,
    fk_reproducing_check,
    khasminskii_check,
    moment_bias_bound,
    moment_profile,
    scale_for_alpha,
    second_moment_mc,
    second_moment_mirror,
    start_node,
)
from .paths import (
    default_workers,
    dirichlet_along,
    dump_paths_csv,
    field_along,
    path_integral,
    sample_paths,
)

__all__ = [
    "PathEnsemble",
    "MCEstimate",
    "MCCheck",
    "KhasminskiiReport",
    "ExpansionReport",
    "sample_paths",
    "path_integral",
    "field_along",
    "dirichlet_along",
    "dump_paths_csv",
    "default_workers",
    "fk_reproducing_check",
    "avg_potential_mc",
    "average_mirror",
    "average_profile",
    "average_bias_bound",
    "moment_profile",
    "moment_bias_bound",
    "start_node",
    "second_moment_mc",
    "second_moment_mirror",
    "expansion_check",
    "khasminskii_check",
    "scale_for_alpha",
    "PathParameterError",
    "EnsembleMismatchError",
    "ScaleSelectionError",
]

# Cleanup docs of unexported modules
_module = dir()
NOT_IN_ALL = [m for m in _module if m not in __all__]

__pdoc__ = {}

for n in NOT_IN_ALL:
    __pdoc__[n] = False
