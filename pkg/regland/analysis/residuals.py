import logging
import math
from typing import Iterable, Optional

import numpy as np

from ..eigen import EigenPair
from ..hamiltonian import Grid1D, Potential, apply_operator, assemble_hamiltonian, magnitude
from ..kernel import KernelSpec
from ..landscape import LandscapeSolution
from ..regularize import BoundaryPolicy, convolve_at, regularized_potential, sample_kernel
from ._exceptions import EmptyWindowError, SweepError
from ._models import ResidualEntry, ResidualReport

logger = logging.getLogger(__name__)

# Interior window half-width in units of √t.
WINDOW_WIDTHS = 5.0

# Fewest positive norms a slope is fitted to.
MIN_SLOPE_POINTS = 5


def interior_window(grid: Grid1D, t: float) -> np.ndarray:
    """
    Mask of the nodes with dist(x, ∂Ω) ≥ 5√t.

    Raises:
        EmptyWindowError: no such node.
    """
    window = grid.boundary_distance() >= WINDOW_WIDTHS * math.sqrt(t)
    if not np.any(window):
        raise EmptyWindowError(t)
    return window


def _entry(
    V: Potential,
    w: np.ndarray,
    source: np.ndarray,
    t: float,
    policy: BoundaryPolicy,
    window: Optional[np.ndarray],
) -> ResidualEntry:
    # R = -Δ_h w + V_t·w - source, written as H·w - V·w + V_t·w - source.
    window = interior_window(V.grid, t) if window is None else window
    H = assemble_hamiltonian(V.grid, V)
    averaged = regularized_potential(V, t, policy).values

    residual = apply_operator(H, w) - V.values * w + averaged * w - source
    identity = residual - (averaged - V.values) * w
    scale = float(np.max(magnitude(H, w) + np.abs(source)))

    sup = float(np.max(np.abs(w)))
    return ResidualEntry(
        t=t,
        sup_norm=float(np.max(np.abs(residual[window]))),
        weighted_norm=float(np.max(np.abs(residual[window] * w[window]))) / sup,
        identity_error=float(np.max(np.abs(identity[window]))) / scale,
        window_size=int(np.sum(window)),
    )


def thm1_residual(
    pair: EigenPair,
    V: Potential,
    t: float,
    policy: BoundaryPolicy = "reflect",
    window: Optional[np.ndarray] = None,
) -> ResidualEntry:
    """
    Residual R = -Δ_hφ + (V∗k_t)φ - λφ of the regularized eigenvalue
    equation on the interior window.

    Because Hφ = λφ holds to rounding, R equals (V∗k_t - V)·φ; the distance
    between the two, relative to the rounding scale, is `identity_error`.

    Raises:
        EmptyWindowError: no node is 5√t away from ∂Ω.
    """
    return _entry(V, pair.phi, pair.lambda_ * pair.phi, t, policy, window)


def thm2_residual(
    u: LandscapeSolution,
    t: float,
    policy: BoundaryPolicy = "reflect",
    window: Optional[np.ndarray] = None,
) -> ResidualEntry:
    """
    Residual R = -Δ_hu + (V∗k_t)u - f of the regularized landscape equation,
    f the right-hand side of `u` (1 for the landscape function). R equals
    (V∗k_t - V)·u up to rounding.
    """
    return _entry(u.potential, u.values, u.rhs, t, policy, window)


def loglog_slope(ts: np.ndarray, norms: np.ndarray) -> Optional[float]:
    """Least-squares slope of log(norm) against log(t) over the positive norms."""
    ts = np.asarray(ts, dtype=float)
    norms = np.asarray(norms, dtype=float)
    positive = norms > 0
    if np.sum(positive) < MIN_SLOPE_POINTS:
        return None
    slope, _ = np.polyfit(np.log(ts[positive]), np.log(norms[positive]), 1)
    return float(slope)


def residual_sweep(
    ts: Iterable[float],
    *,
    pair: Optional[EigenPair] = None,
    V: Optional[Potential] = None,
    u: Optional[LandscapeSolution] = None,
    policy: BoundaryPolicy = "reflect",
) -> ResidualReport:
    """
    Residuals over a list of scales on the common window of the largest one.

    Pass `pair` and `V` for the eigenvalue equation, or `u` for the landscape
    equation. Scales are sorted in decreasing order.

    Raises:
        SweepError: duplicate or nonpositive scales, or a wrong argument combination.
        EmptyWindowError: the largest scale leaves no interior node.
    """
    ts = [float(t) for t in ts]
    if any(t <= 0 for t in ts) or len(set(ts)) != len(ts) or not ts:
        raise SweepError(f"scales must be distinct and positive, got {ts}")
    ts = sorted(ts, reverse=True)

    if u is not None and pair is None:
        kind = "landscape"
        grid = u.grid
    elif pair is not None and V is not None and u is None:
        kind = "eigen"
        grid = V.grid
    else:
        raise SweepError("pass either (pair, V) or u")

    window = interior_window(grid, ts[0])
    if kind == "eigen":
        entries = [thm1_residual(pair, V, t, policy, window) for t in ts]
    else:
        entries = [thm2_residual(u, t, policy, window) for t in ts]

    report = ResidualReport(
        kind=kind,
        entries=entries,
        window=window,
        slope=loglog_slope(ts, [entry.sup_norm for entry in entries]),
        weighted_slope=loglog_slope(ts, [entry.weighted_norm for entry in entries]),
    )
    logger.info(f"Residual sweep ({kind}) over {len(ts)} scales: slope {report.slope}")
    return report


def kernel_comparison(
    V: Potential, x: float, t: float, policy: BoundaryPolicy = "reflect"
) -> float:
    """(V∗k_t)(x) - (V∗g_t)(x) at the node nearest x."""
    node = V.grid.index_of(x)
    spec = KernelSpec(scale=t)
    regularized = convolve_at(V, sample_kernel(spec, V.grid.h), node, policy)
    gaussian = convolve_at(V, sample_kernel(spec, V.grid.h, "gaussian"), node, policy)
    return regularized - gaussian
