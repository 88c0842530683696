"""
Special functions needed by the closed-form kernels.

erfc, the scaled complement erfcx(x) = exp(x²)·erfc(x), and the exponential
integral E₁(z) = Γ(0, z). Each uses a power series below its switchover point
and a continued fraction, evaluated with the modified Lentz algorithm, above
it. Target relative accuracy is 1e-12 over the whole real line.

All functions accept scalars or arrays and return float64 arrays (0-d for
scalar input).
"""

import math

import numpy as np

SQRT_PI = math.sqrt(math.pi)
EULER_GAMMA = 0.57721566490153286061

# Below this, erfcx uses the power series of erf.
ERFCX_SWITCH = 2.0

# Below this, E₁ uses its power series.
E1_SWITCH = 1.0

_EPS = 1e-16
_LENTZ_EPS = 1e-15
_TINY = 1e-300
_MAX_TERMS = 5000


def _erfcx_series(x: np.ndarray) -> np.ndarray:
    # erf(x) = 2/√π · exp(-x²) · Σ x·(2x²)^n / (1·3·…·(2n+1)), all terms positive.
    x2 = x * x
    term = x.copy()
    total = x.copy()
    for n in range(1, _MAX_TERMS):
        term = term * 2.0 * x2 / (2 * n + 1)
        total = total + term
        if np.all(term <= _EPS * total):
            break
    return np.exp(x2) - 2.0 / SQRT_PI * total


def _erfcx_continued_fraction(x: np.ndarray) -> np.ndarray:
    # √π·erfcx(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …)))), modified Lentz.
    f = x.copy()
    c = x.copy()
    d = np.zeros_like(x)
    for n in range(1, _MAX_TERMS):
        a = 0.5 * n
        d = x + a * d
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = x + a / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        delta = c * d
        f = f * delta
        if np.all(np.abs(delta - 1.0) < _LENTZ_EPS):
            break
    return 1.0 / (SQRT_PI * f)


def erfcx(x) -> np.ndarray:
    """
    Scaled complementary error function exp(x²)·erfc(x).

    Finite for all x ≥ 0 (it behaves like 1/(x√π) for large x); for negative x
    it is computed from erfc(-x) = 2 - erfc(x) and grows like 2·exp(x²).
    """
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.empty_like(ax)

    small = ax < ERFCX_SWITCH
    if np.any(small):
        out[small] = _erfcx_series(ax[small])
    if np.any(~small):
        out[~small] = _erfcx_continued_fraction(ax[~small])

    negative = x < 0
    if np.any(negative):
        with np.errstate(over="ignore"):
            xn = x[negative]
            out[negative] = 2.0 * np.exp(xn * xn) - out[negative]
    return out


def erfc(x) -> np.ndarray:
    """Complementary error function."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    with np.errstate(under="ignore"):
        positive = np.exp(-ax * ax) * erfcx(ax)
    return np.where(x < 0, 2.0 - positive, positive)


def _expint_series(z: np.ndarray) -> np.ndarray:
    # E₁(z) = -γ - ln z - Σ (-z)^n / (n·n!)
    term = np.ones_like(z)
    total = np.zeros_like(z)
    for n in range(1, _MAX_TERMS):
        term = -term * z / n
        contribution = term / n
        total = total + contribution
        if np.all(np.abs(contribution) <= _EPS * np.maximum(np.abs(total), _EPS)):
            break
    return -EULER_GAMMA - np.log(z) - total


def _expint_continued_fraction(z: np.ndarray) -> np.ndarray:
    # exp(z)·E₁(z) = 1/(z+1 - 1²/(z+3 - 2²/(z+5 - …))), modified Lentz.
    b = z + 1.0
    c = np.full_like(z, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, _MAX_TERMS):
        a = -float(i * i)
        b = b + 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h = h * delta
        if np.all(np.abs(delta - 1.0) < _LENTZ_EPS):
            break
    return h


def expint_e1_scaled(z) -> np.ndarray:
    """exp(z)·E₁(z) for z > 0; bounded by 1/z and never underflows."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise ValueError("E1 is defined here for z > 0 only")

    out = np.empty_like(z)
    small = z <= E1_SWITCH
    if np.any(small):
        zs = z[small]
        out[small] = np.exp(zs) * _expint_series(zs)
    if np.any(~small):
        out[~small] = _expint_continued_fraction(z[~small])
    return out


def expint_e1(z) -> np.ndarray:
    """Exponential integral E₁(z) = Γ(0, z) = ∫_z^∞ e^{-s}/s ds, for z > 0."""
    z = np.asarray(z, dtype=float)
    with np.errstate(under="ignore"):
        return np.exp(-z) * expint_e1_scaled(z)


def upper_gamma_zero(z) -> np.ndarray:
    """Γ(0, z), the incomplete gamma function appearing in the d=2 kernel."""
    return expint_e1(z)
