import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

import numpy as np

from ..hamiltonian import Grid1D, GridField
from ..utils import io, rng
from ._exceptions import PathParameterError
from ._models import PathEnsemble

logger = logging.getLogger(__name__)

# Paths per random stream; block b uses stream PATH_STREAM_BASE + b.
BLOCK_SIZE = 8192

MIN_SUBSTEPS = 8

DEFAULT_SUBSTEPS = 64
DEFAULT_PATHS = 100_000

# Most paths written by a debug dump.
DUMP_LIMIT = 100


def default_workers() -> Optional[int]:
    """Worker count from REGLAND_WORKERS, None for the executor default."""
    value = os.getenv("REGLAND_WORKERS")
    return int(value) if value else None


def _block(x: float, step: float, substeps: int, seed: int, block: int, size: int) -> np.ndarray:
    generator = rng.stream(seed, rng.PATH_STREAM_BASE + block)
    increments = generator.standard_normal((size, substeps)) * math.sqrt(2.0 * step)

    positions = np.empty((size, substeps + 1))
    positions[:, 0] = x
    positions[:, 1:] = x + np.cumsum(increments, axis=1)
    return positions


def sample_paths(
    x: float,
    t: float,
    m: int = DEFAULT_SUBSTEPS,
    N: int = DEFAULT_PATHS,
    seed: int = 0,
    workers: Optional[int] = None,
) -> PathEnsemble:
    """
    Sample N Brownian paths started at x on [0, t] with m substeps.

    Increments are centered Gaussians of variance 2·t/m, the transition
    density exp(-|x-y|²/4s)/(4πs)^{1/2}. Paths are generated in blocks of
    8192 with one Philox stream per block; blocks run on a thread pool and are
    concatenated in block order, so the ensemble depends only on
    (x, t, m, N, seed).

    Raises:
        PathParameterError: x ∉ (0, 1), t ≤ 0, m < 8 or N < 1.
    """
    if not 0.0 < x < 1.0:
        raise PathParameterError(f"start point must lie in (0, 1), got {x}")
    if not t > 0 or not math.isfinite(t):
        raise PathParameterError(f"horizon must be positive, got {t}")
    if m < MIN_SUBSTEPS:
        raise PathParameterError(f"need at least {MIN_SUBSTEPS} substeps, got {m}")
    if N < 1:
        raise PathParameterError(f"need at least one path, got {N}")

    step = t / m
    sizes = [min(BLOCK_SIZE, N - start) for start in range(0, N, BLOCK_SIZE)]
    workers = workers if workers is not None else default_workers()

    with ThreadPoolExecutor(max_workers=workers) as pool:
        blocks = list(
            pool.map(
                lambda args: _block(x, step, m, seed, *args),
                enumerate(sizes),
            )
        )
    positions = np.concatenate(blocks, axis=0)
    survived = np.all((positions > 0.0) & (positions < 1.0), axis=1)

    logger.debug(
        f"Sampled {N} paths from x={x:.6g} to t={t:.3g} in {len(sizes)} blocks, survival {survived.mean():.6f}"
    )
    return PathEnsemble(
        start=x,
        horizon=t,
        substeps=m,
        count=N,
        seed=seed,
        positions=positions,
        survived=survived,
    )


def field_along(field: GridField, positions: np.ndarray) -> np.ndarray:
    """
    Piecewise-linear interpolation of a grid field at arbitrary positions,
    held constant beyond the first and last node.
    """
    return np.interp(positions, field.grid.nodes, field.values)


def dirichlet_along(grid: Grid1D, values: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Interpolation of nodal values extended by 0 at x=0 and x=1."""
    knots = np.concatenate(([0.0], grid.nodes, [1.0]))
    padded = np.concatenate(([0.0], values, [0.0]))
    return np.interp(positions, knots, padded, left=0.0, right=0.0)


def path_integral(ensemble: PathEnsemble, V: GridField) -> np.ndarray:
    """
    Left-point rule Σ_{j<m} V(ω(s_j))·Δs for ∫₀ᵗ V(ω(s)) ds, per path.
    """
    return field_along(V, ensemble.positions[:, :-1]).sum(axis=1) * ensemble.step


def dump_paths_csv(ensemble: PathEnsemble, path: Path, limit: int = DUMP_LIMIT) -> Path:
    """Write the first min(limit, 100) paths as columns s, path_0, path_1, ..."""
    count = min(limit, DUMP_LIMIT, ensemble.count)
    columns = {"s": ensemble.times}
    for i in range(count):
        columns[f"path_{i}"] = ensemble.positions[i]
    return io.write_columns(path, columns)
