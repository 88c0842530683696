from ._exceptions import FieldValueError, GridMismatchError, GridSizeError
from ._models import (
    FieldProvenance,
    Grid1D,
    GridField,
    Potential,
    SourceTerm,
    TridiagonalOperator,
)
from .generators import (
    block_index,
    constant_rhs,
    gen_modulated_rhs,
    gen_piecewise_potential,
    modulation_profile,
)
from .hamiltonian import (
    apply_operator,
    assemble_hamiltonian,
    laplacian_part,
    magnitude,
    make_grid,
    quadratic_form,
    read_potential_csv,
    read_source_csv,
    write_field_csv,
)

__all__ = [
    "Grid1D",
    "GridField",
    "Potential",
    "SourceTerm",
    "FieldProvenance",
    "TridiagonalOperator",
    "make_grid",
    "gen_piecewise_potential",
    "gen_modulated_rhs",
    "modulation_profile",
    "constant_rhs",
    "block_index",
    "assemble_hamiltonian",
    "apply_operator",
    "laplacian_part",
    "quadratic_form",
    "magnitude",
    "write_field_csv",
    "read_potential_csv",
    "read_source_csv",
    "GridSizeError",
    "GridMismatchError",
    "FieldValueError",
]

# Cleanup docs of unexported modules
_module = dir()
NOT_IN_ALL = [m for m in _module if m not in __all__]

__pdoc__ = {}

for n in NOT_IN_ALL:
    __pdoc__[n] = False
