import logging
import math
import warnings

import numpy as np
from scipy import integrate

from ._exceptions import (
    KernelQuadratureError,
    KernelRadiusError,
    KernelSingularError,
)
from ._models import KernelSpec
from ._special import SQRT_PI, erfcx, expint_e1

logger = logging.getLogger(__name__)

# Beyond this reduced radius every kernel value underflows.
Z_UNDERFLOW = 745.0

DEFAULT_TOLERANCE = 1e-12

# Relative error floor of the quadrature; large values near the origin cannot
# meet a tight absolute tolerance in double precision.
ROUNDING = 1e-13


def _as_radius(r) -> np.ndarray:
    radius = np.asarray(r, dtype=float)
    if np.any(~np.isfinite(radius)) or np.any(radius < 0):
        raise KernelRadiusError("radius must be finite and nonnegative")
    return radius


def _unwrap(values: np.ndarray, like):
    return float(values) if np.ndim(like) == 0 else values


def _prefactor(spec: KernelSpec) -> float:
    return (4.0 * math.pi * spec.scale) ** (-0.5 * spec.dimension)


def _kernel_d1(spec: KernelSpec, z: np.ndarray) -> np.ndarray:
    # k_t(r) = exp(-z)/√(πt) · (1 - √(πz)·erfcx(√z)), z = r²/(4t)
    x = np.sqrt(z)
    bracket = 1.0 - SQRT_PI * x * erfcx(x)
    with np.errstate(under="ignore"):
        return np.exp(-z) / math.sqrt(math.pi * spec.scale) * bracket


def _kernel_d2(spec: KernelSpec, z: np.ndarray) -> np.ndarray:
    # k_t(r) = Γ(0, z) / (4πt)
    out = np.zeros_like(z)
    inside = z < Z_UNDERFLOW
    out[inside] = expint_e1(z[inside]) / (4.0 * math.pi * spec.scale)
    return out


def _reduced_integral(dimension: int, z: float, tolerance: float) -> tuple[float, float]:
    # ∫_0^t (4πs)^{-d/2} e^{-r²/4s} ds / t with s = t·z/w, w = z·e^u becomes
    # (4πt)^{-d/2} ∫_0^∞ exp(u(d/2-1) - z·e^u) du; smooth, no singularity at s=0.
    power = 0.5 * dimension - 1.0
    upper = max(math.log(1000.0 / z), 1.0) + abs(power) * 2.0
    knee = math.log(1.0 / z)
    points = [knee] if 0.0 < knee < upper else None

    def integrand(u: float) -> float:
        return math.exp(power * u - z * math.exp(u))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, error = integrate.quad(
            integrand,
            0.0,
            upper,
            points=points,
            epsabs=tolerance,
            epsrel=1e-14,
            limit=500,
        )
    return value, error


def eval_kernel_quadrature(spec: KernelSpec, r, tolerance: float = DEFAULT_TOLERANCE):
    """
    Evaluate k_t(r) by adaptive quadrature of its defining integral.

    The time integral is rewritten in the log variable u with s = t·z/(z·e^u),
    which removes the essential singularity at s = 0 and leaves an integrand
    that is smooth and decays double-exponentially. The absolute error of the
    returned value is at most `tolerance`, or 1e-13 of the value when that is
    larger.

    Raises:
        KernelRadiusError: r ≤ 0 or tolerance ≤ 0.
        KernelQuadratureError: the error estimate exceeds `tolerance`.
    """
    radius = _as_radius(r)
    if tolerance <= 0:
        raise KernelRadiusError("quadrature tolerance must be positive")
    if np.any(radius <= 0):
        raise KernelRadiusError("quadrature needs r > 0")

    prefactor = _prefactor(spec)
    out = np.empty(radius.shape, dtype=float)
    for index, z in np.ndenumerate(spec.reduced(radius)):
        if z >= Z_UNDERFLOW:
            out[index] = 0.0
            continue

        value, error = _reduced_integral(spec.dimension, float(z), tolerance / prefactor)
        achievable = max(tolerance / prefactor, ROUNDING * value)
        if error > achievable:
            raise KernelQuadratureError(error * prefactor, achievable * prefactor)

        logger.debug(f"{spec}: quadrature at z={z:.3e} error {error * prefactor:.2e}")
        out[index] = prefactor * value

    return _unwrap(out, r)


def eval_kernel(spec: KernelSpec, r):
    """
    Evaluate the regularization kernel k_t at radius r.

    Closed forms are used in d=1 (through erfcx) and d=2 (through Γ(0,z)); for
    d ≥ 3 the value comes from `eval_kernel_quadrature`. Accepts a scalar or an
    array of radii and returns the same shape.

    Raises:
        KernelRadiusError: negative radius.
        KernelSingularError: r = 0 with d ≥ 2.
    """
    radius = _as_radius(r)
    if spec.dimension >= 2 and np.any(radius == 0):
        raise KernelSingularError(spec.dimension)

    z = np.atleast_1d(spec.reduced(radius))
    if spec.dimension == 1:
        values = _kernel_d1(spec, z)
    elif spec.dimension == 2:
        values = _kernel_d2(spec, z)
    else:
        values = np.atleast_1d(eval_kernel_quadrature(spec, np.atleast_1d(radius)))

    return _unwrap(values.reshape(np.shape(radius)), r)


def eval_gaussian(spec: KernelSpec, r):
    """
    Heat kernel g_t(r) = (4πt)^{-d/2}·exp(-r²/(4t)), the comparison kernel.

    Radially symmetric, so negative r is accepted and gives the value at |r|.
    """
    radius = np.asarray(r, dtype=float)
    with np.errstate(under="ignore"):
        values = _prefactor(spec) * np.exp(-spec.reduced(radius))
    return _unwrap(values, r)


def sphere_area(dimension: int) -> float:
    """Surface measure of the unit sphere in ℝ^d (2 for d=1)."""
    return 2.0 * math.pi ** (0.5 * dimension) / math.gamma(0.5 * dimension)


def kernel_moment(spec: KernelSpec, order: int = 0, profile: str = "kernel") -> float:
    """
    Radial moment ∫_{ℝ^d} |x|^order·k(x) dx of the kernel ("kernel") or the
    comparison Gaussian ("gaussian"), by quadrature in r.

    The mass (order 0) is 1 and the second moment is d·t for k_t (2·d·t for
    the heat kernel at time t).
    """
    evaluate = eval_kernel if profile == "kernel" else eval_gaussian
    width = spec.width

    def integrand(rho: float) -> float:
        r = width * rho
        return r ** (spec.dimension - 1 + order) * float(evaluate(spec, r)) * width

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, _ = integrate.quad(
            integrand, 0.0, 40.0, points=[1.0, 4.0], epsabs=1e-13, limit=400
        )
    return sphere_area(spec.dimension) * value
