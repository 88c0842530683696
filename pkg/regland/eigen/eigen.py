"""
Lowest eigenpairs of a symmetric tridiagonal operator.

Eigenvalues are isolated by bisection on the Sturm count, starting from the
Gershgorin interval; eigenvectors come from shifted inverse iteration, with
modified Gram-Schmidt against the already accepted vectors of the same
cluster. Start vectors are drawn from a fixed Philox stream, so the result is
bit-identical from run to run.
"""

import logging
from pathlib import Path
from typing import Optional

import numpy as np
from scipy import linalg

from ..hamiltonian import Grid1D, TridiagonalOperator, apply_operator
from ..utils import io, rng
from ._exceptions import EigenConvergenceError, EigenCountError, ZeroVectorError
from ._models import EigenPair

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps

# Relative bisection width.
BISECTION_RTOL = 1e-12

# Eigenvalues closer than this fraction of the spectral span share a cluster.
CLUSTER_RTOL = 1e-6

MIN_ITERATIONS = 3
MAX_ITERATIONS = 12
MAX_RESTARTS = 3

# Accepted ‖Hφ - λφ‖_∞ relative to |λ| + ‖H‖, with ‖φ‖_∞ = 1.
RESIDUAL_RTOL = 1e-10


def _pivmin(H: TridiagonalOperator) -> float:
    return np.finfo(float).tiny * max(1.0, float(np.max(H.offdiag**2)))


def sturm_count(H: TridiagonalOperator, x):
    """
    Number of eigenvalues of H strictly below x.

    Counts the negative pivots of the LDLᵀ factorization of H - xI. A pivot
    that underflows to zero is replaced by -pivmin, which keeps the
    recurrence finite for every shift. `x` may be a scalar or an array of
    shifts, which are processed together.
    """
    shifts = np.atleast_1d(np.asarray(x, dtype=float))
    pivmin = _pivmin(H)
    offdiag_sq = H.offdiag**2

    count = np.zeros(shifts.shape, dtype=np.int64)
    q = H.diag[0] - shifts
    for i in range(H.n):
        if i > 0:
            q = H.diag[i] - shifts - offdiag_sq[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0

    return int(count[0]) if np.ndim(x) == 0 else count


def bisect_eigenvalues(H: TridiagonalOperator, k: int) -> np.ndarray:
    """The k smallest eigenvalues, all bracketed at once to relative width 1e-12."""
    lower, upper = H.gershgorin()
    norm = max(abs(lower), abs(upper))
    floor = 4.0 * EPS * norm

    lo = np.full(k, lower - floor)
    hi = np.full(k, upper + floor)
    targets = np.arange(1, k + 1)

    for iteration in range(200):
        mid = 0.5 * (lo + hi)
        width = hi - lo
        open_ = width > np.maximum(BISECTION_RTOL * np.abs(mid), floor)
        if not np.any(open_):
            break

        below = sturm_count(H, mid[open_]) >= targets[open_]
        hi[open_] = np.where(below, mid[open_], hi[open_])
        lo[open_] = np.where(below, lo[open_], mid[open_])

    logger.debug(f"Bisection of {k} eigenvalues took {iteration} sweeps")
    return 0.5 * (lo + hi)


def _clusters(values: np.ndarray, span: float) -> list[list[int]]:
    groups: list[list[int]] = [[0]]
    for j in range(1, values.shape[0]):
        if values[j] - values[j - 1] < CLUSTER_RTOL * span:
            groups[-1].append(j)
        else:
            groups.append([j])
    return groups


def _start_vector(n: int, index: int, restart: int) -> np.ndarray:
    generator = rng.stream(rng.derive_seed(index, restart), rng.EIGEN_START_STREAM)
    vector = generator.standard_normal(n)
    return vector / np.linalg.norm(vector)


def _orthogonalize(vector: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    for q in basis:
        vector = vector - np.dot(q, vector) * q
    return vector


def _shifted_banded(H: TridiagonalOperator, shift: float) -> np.ndarray:
    ab = H.as_banded()
    ab[1, :] -= shift
    return ab


def _inverse_iteration(
    H: TridiagonalOperator,
    value: float,
    index: int,
    basis: list[np.ndarray],
    scale: float,
) -> tuple[np.ndarray, float, float]:
    # A shift a few ulps off λ keeps the factorization nonsingular.
    shift = value + 8.0 * EPS * scale
    ab = _shifted_banded(H, shift)
    tolerance = RESIDUAL_RTOL * (abs(value) + scale)

    residual = np.inf
    for restart in range(MAX_RESTARTS + 1):
        vector = _orthogonalize(_start_vector(H.n, index, restart), basis)
        for iteration in range(1, MAX_ITERATIONS + 1):
            try:
                solved = linalg.solve_banded((1, 1), ab, vector, check_finite=False)
            except linalg.LinAlgError:
                ab = _shifted_banded(H, shift + 64.0 * EPS * scale)
                solved = linalg.solve_banded((1, 1), ab, vector, check_finite=False)

            solved = _orthogonalize(solved, basis)
            length = np.linalg.norm(solved)
            if not np.isfinite(length) or length == 0.0:
                break
            vector = solved / length

            estimate = float(np.dot(vector, apply_operator(H, vector)))
            residual = float(
                np.max(np.abs(apply_operator(H, vector) - estimate * vector))
                / np.max(np.abs(vector))
            )
            if iteration >= MIN_ITERATIONS and residual <= tolerance:
                logger.debug(
                    f"Eigenpair {index}: {iteration} iterations, restart {restart}, residual {residual:.2e}"
                )
                return vector, estimate, residual

        logger.debug(f"Eigenpair {index}: restart {restart + 1}, residual {residual:.2e}")

    raise EigenConvergenceError(index, residual, MAX_RESTARTS)


def _normalize_sign(vector: np.ndarray) -> np.ndarray:
    peak = int(np.argmax(np.abs(vector)))
    return vector / vector[peak]


def lowest_eigenpairs(H: TridiagonalOperator, k: int) -> list[EigenPair]:
    """
    The k smallest eigenpairs of H, ascending.

    Each eigenvalue is bracketed by bisection; its vector comes from inverse
    iteration (at least three solves) and the reported λ is the Rayleigh
    quotient of that vector. Vectors whose eigenvalues are closer than
    1e-6 of the spectral span are orthogonalized against each other.

    Raises:
        EigenCountError: k outside [1, n].
        EigenConvergenceError: a vector fails to converge after three restarts.
    """
    if k < 1 or k > H.n:
        raise EigenCountError(k, H.n)

    values = bisect_eigenvalues(H, k)
    lower, upper = H.gershgorin()
    span = upper - lower
    scale = max(abs(lower), abs(upper))

    pairs = []
    for cluster in _clusters(values, span):
        basis: list[np.ndarray] = []
        for j in cluster:
            vector, estimate, residual = _inverse_iteration(H, values[j], j + 1, basis, scale)
            basis.append(vector)

            phi = _normalize_sign(vector)
            pairs.append(
                EigenPair(
                    index=j + 1,
                    lambda_=estimate,
                    phi=phi,
                    residual=float(np.max(np.abs(apply_operator(H, phi) - estimate * phi))),
                )
            )

    logger.info(f"Computed {k} eigenpairs, lambda_1={pairs[0].lambda_:.6g}")
    return pairs


def rayleigh_quotient(H: TridiagonalOperator, w) -> float:
    """⟨Hw, w⟩ / ⟨w, w⟩."""
    w = np.asarray(w, dtype=float)
    norm_sq = float(np.dot(w, w))
    if norm_sq == 0.0:
        raise ZeroVectorError()
    return float(np.dot(apply_operator(H, w), w)) / norm_sq


def write_eigenpairs_csv(
    pairs: list[EigenPair], grid: Grid1D, directory: Path
) -> tuple[Path, Path]:
    """
    Write eigenvalues.csv (index, lambda, residual) and eigenvectors.csv
    (node, x, phi_1..phi_k) into `directory`.
    """
    directory = Path(directory)
    values_path = io.write_csv(
        directory / "eigenvalues.csv",
        ["index", "lambda", "residual"],
        [(pair.index, pair.lambda_, pair.residual) for pair in pairs],
    )

    columns = {"node": np.arange(1, grid.n + 1), "x": grid.nodes}
    for pair in pairs:
        columns[f"phi_{pair.index}"] = pair.phi
    vectors_path = io.write_columns(directory / "eigenvectors.csv", columns)

    return values_path, vectors_path


def read_eigenpairs_csv(directory: Path, k: Optional[int] = None) -> list[EigenPair]:
    """Read pairs written by `write_eigenpairs_csv`, optionally the first k."""
    directory = Path(directory)
    values = io.read_columns(directory / "eigenvalues.csv")
    vectors = io.read_columns(directory / "eigenvectors.csv")

    pairs = []
    for index, value, residual in zip(values["index"], values["lambda"], values["residual"]):
        index = int(index)
        pairs.append(
            EigenPair(
                index=index,
                lambda_=float(value),
                phi=vectors[f"phi_{index}"],
                residual=float(residual),
            )
        )
    return pairs if k is None else pairs[:k]
