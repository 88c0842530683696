from ._exceptions import EigenConvergenceError, EigenCountError, ZeroVectorError
from ._models import EigenPair
from .eigen import (
    bisect_eigenvalues,
    lowest_eigenpairs,
    rayleigh_quotient,
    read_eigenpairs_csv,
    sturm_count,
    write_eigenpairs_csv,
)

__all__ = [
    "EigenPair",
    "sturm_count",
    "bisect_eigenvalues",
    "lowest_eigenpairs",
    "rayleigh_quotient",
    "write_eigenpairs_csv",
    "read_eigenpairs_csv",
    "EigenConvergenceError",
    "EigenCountError",
    "ZeroVectorError",
]

# Cleanup docs of unexported modules
_module = dir()
NOT_IN_ALL = [m for m in _module if m not in __all__]

__pdoc__ = {}

for n in NOT_IN_ALL:
    __pdoc__[n] = False
