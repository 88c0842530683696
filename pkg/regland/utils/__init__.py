from ._exceptions import (
    DependencyError,
    DomainError,
    InvalidInputError,
    NumericalError,
    RegLandError,
)
from .emitter import EnhancedEventEmitter
from .rng import GENERATOR_NAME, derive_seed, stream

__all__ = [
    "RegLandError",
    "InvalidInputError",
    "DomainError",
    "NumericalError",
    "DependencyError",
    "EnhancedEventEmitter",
    "GENERATOR_NAME",
    "stream",
    "derive_seed",
]

# Cleanup docs of unexported modules
_module = dir()
NOT_IN_ALL = [m for m in _module if m not in __all__]

__pdoc__ = {}

for n in NOT_IN_ALL:
    __pdoc__[n] = False
