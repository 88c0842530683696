import logging
from pathlib import Path

import numpy as np

from ..utils import io
from ._exceptions import GridMismatchError, GridSizeError
from ._models import FieldProvenance, Grid1D, GridField, Potential, SourceTerm, TridiagonalOperator

logger = logging.getLogger(__name__)


def make_grid(n: int) -> Grid1D:
    """
    Uniform grid on (0, 1) with n interior nodes and spacing h = 1/(n+1).

    Raises:
        GridSizeError: n < 3.
    """
    if n < 3:
        raise GridSizeError(n)
    return Grid1D(n=n)


def assemble_hamiltonian(grid: Grid1D, V: Potential) -> TridiagonalOperator:
    """
    Three-point discretization of -Δ + V with Dirichlet conditions:
    H = tridiag(-1/h², 2/h² + V_i, -1/h²).
    """
    if V.grid != grid:
        raise GridMismatchError(grid.n, V.grid.n, "potential")

    inv_h2 = 1.0 / grid.h**2
    return TridiagonalOperator(
        diag=2.0 * inv_h2 + V.values,
        offdiag=np.full(grid.n - 1, -inv_h2),
        h=grid.h,
    )


def _vector(H: TridiagonalOperator, w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (H.n,):
        raise GridMismatchError(H.n, int(w.shape[0]) if w.ndim else 0, "vector")
    return w


def apply_operator(H: TridiagonalOperator, w) -> np.ndarray:
    """
    Matrix-vector product H·w; values outside the grid are the Dirichlet zeros.
    """
    w = _vector(H, w)
    out = H.diag * w
    out[:-1] += H.offdiag * w[1:]
    out[1:] += H.offdiag * w[:-1]
    return out


def laplacian_part(H: TridiagonalOperator, w) -> np.ndarray:
    """-Δ_h w, i.e. H·w with the potential term removed."""
    w = _vector(H, w)
    return apply_operator(H, w) - H.potential_values * w


def quadratic_form(H: TridiagonalOperator, w) -> float:
    """⟨Hw, w⟩, the discrete Dirichlet energy ∫|∇w|² + ∫V w² (up to h)."""
    w = _vector(H, w)
    return float(np.dot(apply_operator(H, w), w))


def magnitude(H: TridiagonalOperator, w) -> np.ndarray:
    """|H|·|w| entrywise, the scale of rounding errors in H·w."""
    w = np.abs(_vector(H, w))
    out = np.abs(H.diag) * w
    out[:-1] += np.abs(H.offdiag) * w[1:]
    out[1:] += np.abs(H.offdiag) * w[:-1]
    return out


def write_field_csv(field: GridField, path: Path, name: str = "value") -> Path:
    """Write a grid field as (node, x, value) rows."""
    grid = field.grid
    return io.write_columns(
        path,
        {
            "node": np.arange(1, grid.n + 1),
            "x": grid.nodes,
            name: field.values,
        },
    )


def read_potential_csv(path: Path, name: str = "value") -> Potential:
    """Read a potential written by `write_field_csv`."""
    columns = io.read_columns(path)
    values = columns[name]
    return Potential(
        grid=make_grid(values.shape[0]),
        values=values,
        provenance=FieldProvenance(generator=f"file:{Path(path).name}"),
    )


def read_source_csv(path: Path, name: str = "value") -> SourceTerm:
    """Read a right-hand side written by `write_field_csv`."""
    columns = io.read_columns(path)
    values = columns[name]
    return SourceTerm(
        grid=make_grid(values.shape[0]),
        values=values,
        provenance=FieldProvenance(generator=f"file:{Path(path).name}"),
    )
