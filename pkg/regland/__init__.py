from .eigen import EigenPair, lowest_eigenpairs
from .hamiltonian import Grid1D, Potential, assemble_hamiltonian, make_grid
from .kernel import KernelSpec, eval_kernel
from .landscape import LandscapeSolution, solve_landscape
from .regularize import regularized_potential
from .utils import RegLandError
from .version import __version__

__all__ = [
    "__version__",
    "KernelSpec",
    "eval_kernel",
    "Grid1D",
    "Potential",
    "make_grid",
    "assemble_hamiltonian",
    "EigenPair",
    "lowest_eigenpairs",
    "LandscapeSolution",
    "solve_landscape",
    "regularized_potential",
    "RegLandError",
]

# Cleanup docs of unexported modules
_module = dir()
NOT_IN_ALL = [m for m in _module if m not in __all__]

__pdoc__ = {}

for n in NOT_IN_ALL:
    __pdoc__[n] = False
