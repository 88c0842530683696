from ._exceptions import KernelQuadratureError, KernelRadiusError, KernelSingularError
from ._models import KernelSpec
from ._special import erfc, erfcx, expint_e1, upper_gamma_zero
from .kernel import (
    eval_gaussian,
    eval_kernel,
    eval_kernel_quadrature,
    kernel_moment,
    sphere_area,
)

__all__ = [
    "KernelSpec",
    "eval_kernel",
    "eval_kernel_quadrature",
    "eval_gaussian",
    "kernel_moment",
    "sphere_area",
    "erfc",
    "erfcx",
    "expint_e1",
    "upper_gamma_zero",
    "KernelSingularError",
    "KernelRadiusError",
    "KernelQuadratureError",
]

# Cleanup docs of unexported modules
_module = dir()
NOT_IN_ALL = [m for m in _module if m not in __all__]

__pdoc__ = {}

for n in NOT_IN_ALL:
    __pdoc__[n] = False
