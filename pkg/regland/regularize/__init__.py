from ._exceptions import InteriorWindowError, KernelDimensionError
from ._models import BoundaryPolicy, DiscreteKernel, KernelKind, RegularizedField
from .regularize import (
    check_interior,
    convolve,
    convolve_at,
    identity_kernel,
    inverse_mean_scale,
    regularized_potential,
    sample_kernel,
    second_order_term,
)

__all__ = [
    "BoundaryPolicy",
    "KernelKind",
    "DiscreteKernel",
    "RegularizedField",
    "sample_kernel",
    "identity_kernel",
    "convolve",
    "convolve_at",
    "regularized_potential",
    "second_order_term",
    "inverse_mean_scale",
    "check_interior",
    "InteriorWindowError",
    "KernelDimensionError",
]

# Cleanup docs of unexported modules
_module = dir()
NOT_IN_ALL = [m for m in _module if m not in __all__]

__pdoc__ = {}

for n in NOT_IN_ALL:
    __pdoc__[n] = False
