import logging
import math

import numpy as np

from ..utils import rng
from ._exceptions import FieldValueError
from ._models import FieldProvenance, Grid1D, Potential, SourceTerm

logger = logging.getLogger(__name__)

# Lower clamp keeping the modulated right-hand side strictly positive.
RHS_FLOOR = 1e-12

# Node count the modulated right-hand side formula is written for.
RHS_REFERENCE_NODES = 3000


def block_index(n: int, intervals: int) -> np.ndarray:
    """
    Block number of every node when n nodes are split into `intervals` equal
    blocks; the last block absorbs the n mod M remainder nodes.
    """
    size = n // intervals
    return np.minimum(np.arange(n) // size, intervals - 1)


def gen_piecewise_potential(
    grid: Grid1D, intervals: int, vmax: float, seed: int
) -> Potential:
    """
    Random piecewise-constant potential: Ω is split into M equal blocks of
    nodes and every block gets an independent value uniform on [0, vmax].

    The values come from the Philox stream (seed, POTENTIAL_STREAM), so equal
    (seed, M, vmax, n) always give bit-identical potentials.

    Raises:
        FieldValueError: M outside [1, n] or negative vmax.
    """
    if intervals < 1 or intervals > grid.n:
        raise FieldValueError(
            f"interval count must be in [1, n={grid.n}], got {intervals}"
        )
    if vmax < 0 or not math.isfinite(vmax):
        raise FieldValueError(f"vmax must be finite and nonnegative, got {vmax}")

    generator = rng.stream(seed, rng.POTENTIAL_STREAM)
    levels = generator.uniform(0.0, 1.0, size=intervals) * vmax
    values = levels[block_index(grid.n, intervals)]

    return Potential(
        grid=grid,
        values=values,
        provenance=FieldProvenance(
            generator="piecewise",
            rng=rng.GENERATOR_NAME,
            seed=seed,
            intervals=intervals,
            vmax=vmax,
        ),
    )


def modulation_profile(k) -> np.ndarray:
    """Deterministic factor (1 + k/2000)·(2 + cos(k)/50) of the modulated rhs."""
    k = np.asarray(k, dtype=float)
    return (1.0 + k / 2000.0) * (2.0 + np.cos(k) / 50.0)


def gen_modulated_rhs(grid: Grid1D, seed: int) -> SourceTerm:
    """
    Random positive right-hand side f_k = (1 + k/2000)(2 + cos(k)/50)·U_k,
    k = 1..n, with U_k uniform on [0, 1] from the Philox stream
    (seed, RHS_STREAM). Entries are clamped below at 1e-12.

    The formula is written for n = 3000; on other grids k is rescaled linearly
    to k·3000/n and a warning is logged.
    """
    k = np.arange(1, grid.n + 1, dtype=float)
    if grid.n != RHS_REFERENCE_NODES:
        logger.warning(
            f"Modulated rhs is defined for n={RHS_REFERENCE_NODES}, rescaling k for n={grid.n}"
        )
        k = k * RHS_REFERENCE_NODES / grid.n

    draws = rng.stream(seed, rng.RHS_STREAM).uniform(0.0, 1.0, size=grid.n)
    values = np.maximum(modulation_profile(k) * draws, RHS_FLOOR)

    return SourceTerm(
        grid=grid,
        values=values,
        provenance=FieldProvenance(generator="modulated", rng=rng.GENERATOR_NAME, seed=seed),
    )


def constant_rhs(grid: Grid1D, value: float = 1.0) -> SourceTerm:
    """f ≡ value; value = 1 gives the classical landscape equation."""
    return SourceTerm(
        grid=grid,
        values=np.full(grid.n, float(value)),
        provenance=FieldProvenance(generator="constant"),
    )
