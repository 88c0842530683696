"""
Monte Carlo checks built on the Feynman-Kac representation.

Every check takes a PathEnsemble sampled beforehand, so the same paths can be
reused across checks and the result depends only on the ensemble seed. The
deterministic targets come from the regularize module. Where the left-point
rule along the paths has a bias, the exact expectation of the left-point sum
(its "mirror", computed with sampled Gaussians) sizes the allowance, and the
variation of the same expectation profile between substeps bounds it.
"""

import logging
import math
from typing import Callable, Optional, Sequence, Union

import numpy as np

from ..eigen import EigenPair
from ..hamiltonian import GridMismatchError, Potential
from ..kernel import KernelSpec
from ..regularize import (
    BoundaryPolicy,
    check_interior,
    convolve,
    convolve_at,
    identity_kernel,
    regularized_potential,
    sample_kernel,
    second_order_term,
)
from ..utils import rng
from ._exceptions import EnsembleMismatchError, PathParameterError, ScaleSelectionError
from ._models import (
    ROUNDING,
    SIGMAS,
    ExpansionReport,
    KhasminskiiReport,
    MCCheck,
    MCEstimate,
    PathEnsemble,
)
from .paths import DEFAULT_PATHS, DEFAULT_SUBSTEPS, dirichlet_along, path_integral, sample_paths

logger = logging.getLogger(__name__)

# Cells where an expectation profile is not monotone can exceed their corner
# oscillation.
BIAS_SLACK = 2.0

# Distance from a node below which a start point counts as that node.
NODE_TOLERANCE = 1e-12

PhiLike = Union[EigenPair, np.ndarray, Callable[[np.ndarray], np.ndarray]]


def _check_ensemble(ensemble: PathEnsemble, x: float, t: float) -> None:
    if abs(ensemble.start - x) > 1e-12:
        raise EnsembleMismatchError("start point", x, ensemble.start)
    if abs(ensemble.horizon - t) > 1e-12 * max(t, 1.0):
        raise EnsembleMismatchError("horizon", t, ensemble.horizon)


def start_node(V: Potential, x: float) -> int:
    """
    0-based node at x. The grid targets are nodal values, so x must be a node.

    Raises:
        PathParameterError: x farther than 1e-12 from every node.
    """
    node = V.grid.index_of(x)
    nearest = float(V.grid.nodes[node])
    if abs(nearest - x) > NODE_TOLERANCE:
        raise PathParameterError(
            f"""
            Start point x={x:.12g} is not a node of {V.grid} (nearest {nearest:.12g}), Possible ways to fix this:
            - Start the paths at grid.nodes[grid.index_of(x)].
            """
        )
    return node


def _gaussian(V: Potential, s: float):
    if s <= 0:
        return identity_kernel(V.grid.h)
    return sample_kernel(KernelSpec(scale=s), V.grid.h, "gaussian")


def _log_check(check: MCCheck) -> MCCheck:
    logger.debug(
        f"{check.name} at x={check.x:.6g}, t={check.t:.3g}: {check.estimate} vs {check.target:.8g} "
        f"(allowance {check.allowance:.2e}, bound {check.bias_bound}) -> {check.passed}"
    )
    return check


def fk_reproducing_check(
    phi: PhiLike,
    lam: float,
    V: Potential,
    x: float,
    t: float,
    ensemble: PathEnsemble,
) -> MCCheck:
    """
    Estimate e^{λt}·E[φ(ω(t))·exp(-∫₀ᵗ V(ω(s)) ds)] over absorbed paths and
    compare with φ(x).

    `phi` is an EigenPair or a nodal vector on the grid of V (extended by 0
    at ∂Ω), or a callable evaluated at the path endpoints. The check passes
    iff the deviation is within 3·stderr + t·‖V‖_∞·|φ(x)|/m, the left-point
    bias.
    """
    _check_ensemble(ensemble, x, t)

    if callable(phi) and not isinstance(phi, EigenPair):
        evaluate = phi
    else:
        values = phi.phi if isinstance(phi, EigenPair) else np.asarray(phi, dtype=float)
        if values.shape != (V.grid.n,):
            raise GridMismatchError(V.grid.n, values.shape[0], "eigenvector")

        def evaluate(positions):
            return dirichlet_along(V.grid, values, positions)

    weights = np.exp(-path_integral(ensemble, V)) * ensemble.survived
    samples = math.exp(lam * t) * evaluate(ensemble.endpoints) * weights
    estimate = MCEstimate.from_samples(samples, int(np.sum(ensemble.survived)))

    target = float(evaluate(np.array([x]))[0])
    allowance = t * V.sup * abs(target) / ensemble.substeps
    return _log_check(MCCheck.judge("feynman-kac", x, t, estimate, target, allowance))


def average_profile(V: Potential, node: int, t: float, m: int, policy: BoundaryPolicy = "reflect") -> np.ndarray:
    """E V(ω(s_j)) = (V∗g_{s_j})(x) at the substep times s_j = j·t/m, j = 0..m."""
    step = t / m
    return np.array([convolve_at(V, _gaussian(V, j * step), node, policy) for j in range(m + 1)])


def average_mirror(V: Potential, node: int, t: float, m: int, policy: BoundaryPolicy = "reflect") -> float:
    """
    Exact expectation of the left-point average (1/m)·Σ_{j<m} V(ω(s_j)):
    (1/m)·Σ_j (V∗g_{s_j})(x).
    """
    return float(np.mean(average_profile(V, node, t, m, policy)[:m]))


def average_bias_bound(profile: np.ndarray) -> float:
    """
    Bound on |left-point mean - time average| of a profile sampled at the
    m+1 substep times: Σ_j |F(s_{j+1}) - F(s_j)| / m, exact for a profile
    monotone between substeps, times BIAS_SLACK.
    """
    m = profile.shape[0] - 1
    return BIAS_SLACK * float(np.sum(np.abs(np.diff(profile)))) / m


def avg_potential_mc(
    V: Potential,
    x: float,
    t: float,
    ensemble: PathEnsemble,
    policy: BoundaryPolicy = "reflect",
) -> MCCheck:
    """
    Estimate E[(1/t)∫₀ᵗ V(ω(s)) ds] over free paths and compare with
    (V∗k_t)(x). The allowance is the distance between V_t(x) and the exact
    mean of the left-point sum; the check fails when that distance exceeds
    the left-point bias bound plus the lattice mass drift of k_t.

    Raises:
        PathParameterError: x is not a grid node.
        InteriorWindowError: x closer than 5√t to ∂Ω.
    """
    _check_ensemble(ensemble, x, t)
    node = start_node(V, x)
    check_interior(V, node, t)

    m = ensemble.substeps
    estimate = MCEstimate.from_samples(path_integral(ensemble, V) / t)
    K = sample_kernel(KernelSpec(scale=t), V.grid.h)
    target = convolve_at(V, K, node, policy)

    profile = average_profile(V, node, t, m, policy)
    mirror = float(np.mean(profile[:m]))
    bound = average_bias_bound(profile) + abs(K.raw_mass - 1.0) * abs(profile[0] - target)
    return _log_check(
        MCCheck.judge("average-potential", x, t, estimate, target, abs(mirror - target), bound)
    )


def moment_profile(V: Potential, node: int, t: float, m: int, policy: BoundaryPolicy = "reflect") -> np.ndarray:
    """
    G[j, k] = E V(ω(s_j))·V(ω(s_k)) for j, k = 0..m, from

        G[j, j+l] = ((V·(V∗g_{s_l}))∗g_{s_j})(x).
    """
    step = t / m
    kernels = [_gaussian(V, j * step) for j in range(m + 1)]

    G = np.empty((m + 1, m + 1))
    for lag in range(m + 1):
        product = V.values * convolve(V, kernels[lag], policy)
        for j in range(m + 1 - lag):
            G[j, j + lag] = G[j + lag, j] = convolve_at(product, kernels[j], node, policy)
    return G


def second_moment_mirror(
    V: Potential, node: int, t: float, m: int, policy: BoundaryPolicy = "reflect"
) -> float:
    """
    Exact expectation of (Σ_{j<m} V(ω(s_j))·Δs)² = Δs²·Σ_{j,k<m} G[j, k].
    """
    step = t / m
    return step * step * float(np.sum(moment_profile(V, node, t, m, policy)[:m, :m]))


def moment_bias_bound(G: np.ndarray, t: float) -> float:
    """
    Bound on |left-point double sum - double integral| of G: Δs² times the
    corner oscillation of G summed over the m² cells, times BIAS_SLACK.
    """
    m = G.shape[0] - 1
    corners = np.stack([G[:-1, :-1], G[1:, :-1], G[:-1, 1:], G[1:, 1:]])
    oscillation = corners.max(axis=0) - corners.min(axis=0)
    return BIAS_SLACK * (t / m) ** 2 * float(np.sum(oscillation))


def second_moment_mc(
    V: Potential,
    x: float,
    t: float,
    ensemble: PathEnsemble,
    policy: BoundaryPolicy = "reflect",
) -> MCCheck:
    """
    Estimate E(∫₀ᵗ V(ω(s)) ds)² over free paths and compare with the
    deterministic double integral of `second_order_term`. The allowance is
    the distance to the exact mean of the left-point square, bounded by the
    corner oscillation of E V(ω(s))·V(ω(r)) over the substep cells.

    Raises:
        PathParameterError: x is not a grid node.
        InteriorWindowError: x closer than 5√t to ∂Ω.
    """
    _check_ensemble(ensemble, x, t)
    node = start_node(V, x)
    check_interior(V, node, t)

    m = ensemble.substeps
    estimate = MCEstimate.from_samples(path_integral(ensemble, V) ** 2)
    target = second_order_term(V, x, t, policy)

    G = moment_profile(V, node, t, m, policy)
    mirror = (t / m) ** 2 * float(np.sum(G[:m, :m]))
    return _log_check(
        MCCheck.judge("second-moment", x, t, estimate, target, abs(mirror - target), moment_bias_bound(G, t))
    )


def expansion_check(
    V: Potential,
    x: float,
    t: float,
    ensemble: PathEnsemble,
    policy: BoundaryPolicy = "reflect",
) -> ExpansionReport:
    """
    Estimate E exp(-∫₀ᵗ V(ω(s)) ds) over free paths next to its expansions
    1 - t·V_t(x) and 1 - t·V_t(x) + ½·E(∫V)².

    Raises:
        PathParameterError: x is not a grid node.
    """
    _check_ensemble(ensemble, x, t)
    node = start_node(V, x)
    check_interior(V, node, t)

    estimate = MCEstimate.from_samples(np.exp(-path_integral(ensemble, V)))
    averaged = convolve_at(V, sample_kernel(KernelSpec(scale=t), V.grid.h), node, policy)
    first = 1.0 - t * averaged
    second = first + 0.5 * second_order_term(V, x, t, policy)

    return ExpansionReport(x=x, t=t, estimate=estimate, first_order=first, second_order=second)


def khasminskii_check(
    V: Potential,
    t: float,
    xs: Sequence[float],
    m: int = DEFAULT_SUBSTEPS,
    N: int = DEFAULT_PATHS,
    seed: int = 0,
    policy: BoundaryPolicy = "reflect",
    workers: Optional[int] = None,
) -> KhasminskiiReport:
    """
    Khasminskii's bound sup_x E_x exp(∫₀ᵗ V) ≤ 1/(1-α), with α = t·max V_t.

    Each start point gets its own free-path ensemble with a seed derived from
    (seed, point number). When α ≥ 1 nothing is sampled and the report is
    marked skipped.
    """
    alpha = t * float(np.max(regularized_potential(V, t, policy).values))
    if alpha >= 1.0:
        notice = f"precondition unmet: alpha={alpha:.4g} >= 1"
        logger.warning(f"Khasminskii check skipped, {notice}")
        return KhasminskiiReport(alpha=alpha, t=t, notice=notice)

    bound = 1.0 / (1.0 - alpha)
    best: Optional[tuple[float, MCEstimate]] = None
    for i, x in enumerate(xs):
        ensemble = sample_paths(x, t, m, N, rng.derive_seed(seed, i), workers)
        estimate = MCEstimate.from_samples(np.exp(path_integral(ensemble, V)))
        if best is None or estimate.mean > best[1].mean:
            best = (x, estimate)

    argmax, estimate = best
    passed = estimate.mean <= bound + SIGMAS * estimate.stderr + ROUNDING * bound
    logger.info(
        f"Khasminskii: alpha={alpha:.4g}, sup E exp = {estimate} at x={argmax:.4g}, bound {bound:.6g} -> {passed}"
    )
    return KhasminskiiReport(
        alpha=alpha,
        t=t,
        mc_sup=estimate.mean,
        stderr=estimate.stderr,
        argmax=argmax,
        bound=bound,
        passed=passed,
    )


def scale_for_alpha(
    V: Potential,
    alpha: float,
    policy: BoundaryPolicy = "reflect",
    rtol: float = 1e-6,
    max_iterations: int = 100,
) -> float:
    """
    Scale t with t·max V_t = α, by the fixed-point iteration t ← α / max V_t
    started from α / max V.

    Raises:
        ScaleSelectionError: V ≡ 0 or α ∉ (0, 1).
    """
    if not 0.0 < alpha < 1.0:
        raise ScaleSelectionError(f"alpha must lie in (0, 1), got {alpha}")
    if V.sup == 0.0:
        raise ScaleSelectionError("no scale reaches a positive alpha for V ≡ 0")

    t = alpha / V.sup
    for iteration in range(max_iterations):
        peak = float(np.max(regularized_potential(V, t, policy).values))
        updated = alpha / peak
        if abs(updated - t) <= rtol * t:
            t = updated
            break
        t = updated
    else:
        logger.warning(f"scale_for_alpha did not settle after {max_iterations} iterations")

    logger.debug(f"Scale for alpha={alpha}: t={t:.6g} after {iteration + 1} iterations")
    return t
