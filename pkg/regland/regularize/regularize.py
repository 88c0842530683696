import logging
import math
import warnings
from functools import lru_cache
from typing import Union

import numpy as np
from scipy import integrate, ndimage

from ..hamiltonian import GridField, Potential
from ..kernel import KernelSpec, eval_gaussian, eval_kernel
from ..kernel._special import erfc
from ..utils._exceptions import InvalidInputError
from ._exceptions import InteriorWindowError, KernelDimensionError
from ._models import BoundaryPolicy, DiscreteKernel, KernelKind, RegularizedField

logger = logging.getLogger(__name__)

# Truncation radius in units of √t.
TRUNCATION_WIDTHS = 10.0

# Minimal truncation radius in units of h.
MIN_TAPS = 5

# Required distance to ∂Ω, in units of √t.
INTERIOR_WIDTHS = 5.0

# Gauss-Legendre order of the outer time integral of the second moment.
SECOND_ORDER_NODES = 32

# Clamp of the inverse-mean scale.
MAX_SCALE = 1e-2

_MODES = {"reflect": "reflect", "zero": "constant"}


def _values(field: Union[GridField, np.ndarray]) -> np.ndarray:
    if isinstance(field, GridField):
        return field.values
    return np.asarray(field, dtype=float)


def identity_kernel(h: float) -> DiscreteKernel:
    """The single-weight kernel 1/h, convolution with which is the identity."""
    return DiscreteKernel(
        spec=None,
        h=h,
        offsets=np.array([0]),
        weights=np.array([1.0 / h]),
        identity=True,
    )


def _tail_mass(spec: KernelSpec, kind: KernelKind, reach: float) -> float:
    if kind == "gaussian":
        return float(erfc(reach / (2.0 * spec.width)))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        tail, _ = integrate.quad(
            lambda r: float(eval_kernel(spec, r)),
            reach,
            reach + 40.0 * spec.width,
            epsabs=1e-15,
            limit=200,
        )
    return 2.0 * tail


@lru_cache(maxsize=256)
def sample_kernel(spec: KernelSpec, h: float, kind: KernelKind = "regularizing") -> DiscreteKernel:
    """
    Sample k_t (or, with kind="gaussian", the heat kernel g_t) on the lattice
    h·ℤ, truncated at R·h with R = ceil(max(10√t, 5h)/h), and rescale to unit
    discrete mass.

    The raw mass Σ w_j·h before rescaling is kept on the result; for k_t it
    exceeds 1 by about h²/(12t), the lattice error of the cusp at the origin.
    When 10√t < h the kernel is unresolvable and the identity kernel is
    returned with a warning.

    Raises:
        KernelDimensionError: spec.dimension ≠ 1.
    """
    if spec.dimension != 1:
        raise KernelDimensionError(spec.dimension)
    if h <= 0:
        raise InvalidInputError("grid spacing must be positive")

    if TRUNCATION_WIDTHS * spec.width < h:
        logger.warning(f"{spec} is narrower than h={h:.3g}, using the identity kernel")
        return identity_kernel(h)

    radius = math.ceil(max(TRUNCATION_WIDTHS * spec.width, MIN_TAPS * h) / h - 1e-9)
    offsets = np.arange(-radius, radius + 1)
    distances = np.abs(offsets) * h

    evaluate = eval_gaussian if kind == "gaussian" else eval_kernel
    samples = np.asarray(evaluate(spec, distances), dtype=float)
    raw_mass = float(np.sum(samples) * h)

    kernel = DiscreteKernel(
        spec=spec,
        kind=kind,
        h=h,
        offsets=offsets,
        weights=samples / raw_mass,
        raw_mass=raw_mass,
        tail_mass=_tail_mass(spec, kind, radius * h),
    )
    logger.debug(
        f"Sampled {kind} {spec}: R={radius}, raw mass {raw_mass:.12f}, tail {kernel.tail_mass:.2e}"
    )
    return kernel


def convolve(
    field: Union[GridField, np.ndarray],
    K: DiscreteKernel,
    policy: BoundaryPolicy = "reflect",
) -> np.ndarray:
    """
    (field∗K)_i = Σ_j w_j·field_{i-j}·h.

    Outside Ω the field is continued by half-sample even reflection
    (policy="reflect", which preserves constants) or by zeros (policy="zero").
    """
    values = _values(field)
    if K.identity:
        return values.copy()
    return ndimage.convolve1d(values, K.taps, mode=_MODES[policy], cval=0.0)


def _extended(values: np.ndarray, indices: np.ndarray, policy: BoundaryPolicy) -> np.ndarray:
    n = values.shape[0]
    if policy == "zero":
        inside = (indices >= 0) & (indices < n)
        out = np.zeros(indices.shape)
        out[inside] = values[indices[inside]]
        return out

    folded = np.mod(indices, 2 * n)
    folded = np.where(folded >= n, 2 * n - 1 - folded, folded)
    return values[folded]


def convolve_at(
    field: Union[GridField, np.ndarray],
    K: DiscreteKernel,
    node: int,
    policy: BoundaryPolicy = "reflect",
) -> float:
    """(field∗K) at a single 0-based node, same boundary handling as `convolve`."""
    values = _values(field)
    if K.identity:
        return float(values[node])
    samples = _extended(values, node - K.offsets, policy)
    return float(np.dot(K.taps, samples))


def regularized_potential(
    V: Potential,
    t: float,
    policy: BoundaryPolicy = "reflect",
    kind: KernelKind = "regularizing",
) -> RegularizedField:
    """
    V_t = V∗k_t on the grid of V. t = 0 gives V itself.
    """
    if t < 0 or not math.isfinite(t):
        raise InvalidInputError(f"scale t must be finite and nonnegative, got {t}")

    h = V.grid.h
    K = identity_kernel(h) if t == 0 else sample_kernel(KernelSpec(scale=t), h, kind)
    return RegularizedField(
        grid=V.grid,
        values=convolve(V, K, policy),
        t=t,
        policy=policy,
        identity=K.identity,
    )


def check_interior(V: GridField, node: int, t: float) -> None:
    """Raise InteriorWindowError unless dist(x_node, ∂Ω) ≥ 5√t."""
    x = float(V.grid.nodes[node])
    distance = min(x, 1.0 - x)
    if distance < INTERIOR_WIDTHS * math.sqrt(t):
        raise InteriorWindowError(x, t, distance)


def second_order_term(
    V: Potential,
    x: float,
    t: float,
    policy: BoundaryPolicy = "reflect",
) -> float:
    """
    E(∫₀ᵗ V(ω(s)) ds)² for Brownian motion started at x, from

        2 ∫₀ᵗ ∫ V(y)·g_s(x-y)·(t-s)·(V∗k_{t-s})(y) dy ds.

    The outer integral uses 32-point Gauss-Legendre nodes, which avoid both
    endpoints; the inner one is the lattice sum with sampled kernels. For
    constant V the result is c²t² up to rounding.

    Raises:
        InteriorWindowError: x closer than 5√t to ∂Ω.
    """
    if t <= 0:
        raise InvalidInputError(f"scale t must be positive, got {t}")

    node = V.grid.index_of(x)
    check_interior(V, node, t)

    h = V.grid.h
    roots, weights = np.polynomial.legendre.leggauss(SECOND_ORDER_NODES)
    times = 0.5 * t * (roots + 1.0)
    weights = 0.5 * t * weights

    total = 0.0
    for s, weight in zip(times, weights):
        remaining = t - s
        averaged = convolve(V, sample_kernel(KernelSpec(scale=remaining), h), policy)
        integrand = V.values * remaining * averaged
        gaussian = sample_kernel(KernelSpec(scale=s), h, "gaussian")
        total += weight * convolve_at(integrand, gaussian, node, policy)

    return 2.0 * total


def inverse_mean_scale(V: Potential) -> float:
    """
    Default scale t = 1/mean(V), clamped to [4h², 1e-2]; the largest scale for
    V ≡ 0.
    """
    lower = 4.0 * V.grid.h**2
    mean = float(np.mean(V.values))
    if mean <= 0:
        return MAX_SCALE
    return float(np.clip(1.0 / mean, lower, MAX_SCALE))
