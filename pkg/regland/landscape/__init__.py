from ._exceptions import LandscapePositivityError, NonPositiveSourceError
from ._models import LandscapeSolution
from .landscape import (
    generalized_effective_potential,
    inverse_landscape,
    landscape_bound_violation,
    regularized_source,
    solve_landscape,
    write_landscape_csv,
)

__all__ = [
    "LandscapeSolution",
    "solve_landscape",
    "inverse_landscape",
    "regularized_source",
    "generalized_effective_potential",
    "landscape_bound_violation",
    "write_landscape_csv",
    "NonPositiveSourceError",
    "LandscapePositivityError",
]

# Cleanup docs of unexported modules
_module = dir()
NOT_IN_ALL = [m for m in _module if m not in __all__]

__pdoc__ = {}

for n in NOT_IN_ALL:
    __pdoc__[n] = False
