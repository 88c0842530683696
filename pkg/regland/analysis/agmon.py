import logging
from typing import Optional

import numpy as np
from scipy import integrate

from ..eigen import EigenPair
from ._models import EnvelopeComparison, EnvelopeReport

logger = logging.getLogger(__name__)

# Nodes where |φ| is below this fraction of ‖φ‖_∞ are left out of the fit.
NEGLIGIBLE = 1e-12


def _nodes(n: int) -> np.ndarray:
    return np.arange(1, n + 1, dtype=float) / (n + 1)


def agmon_profile(w, lam: float, r0: int) -> np.ndarray:
    """
    ρ(r0, r) for every node r: the trapezoidal integral of √((w - λ)₊)
    between x_{r0} and x_r. `w` is the envelope potential (1/u or V_t) on the
    interior nodes of a uniform grid.
    """
    w = np.asarray(w, dtype=float)
    density = np.sqrt(np.maximum(w - lam, 0.0))
    cumulative = integrate.cumulative_trapezoid(density, _nodes(w.shape[0]), initial=0.0)
    return np.abs(cumulative - cumulative[r0])


def agmon_distance(w, lam: float, r0: int, r: int) -> float:
    """Agmon distance ρ(r0, r) between two 0-based nodes."""
    return float(agmon_profile(w, lam, r0)[r])


def decay_envelope_check(
    phi, w, lam: float, r0: Optional[int] = None
) -> EnvelopeReport:
    """
    Fit the smallest C with log|φ(r)| ≤ C - ρ(r0, r) over the nodes where
    |φ| > 1e-12·‖φ‖_∞. r0 defaults to argmax |φ|.
    """
    phi = phi.phi if isinstance(phi, EigenPair) else np.asarray(phi, dtype=float)
    magnitude = np.abs(phi)
    r0 = int(np.argmax(magnitude)) if r0 is None else r0

    rho = agmon_profile(w, lam, r0)
    used = magnitude > NEGLIGIBLE * np.max(magnitude)
    logs = np.log(magnitude[used])
    offset = float(np.max(logs + rho[used]))

    violations = logs > offset - rho[used] + 1e-12 * max(abs(offset), 1.0)
    return EnvelopeReport(
        offset=offset,
        violation_fraction=float(np.mean(violations)) if violations.size else 0.0,
        nodes_used=int(np.sum(used)),
        r0=r0,
    )


def compare_envelopes(pair: EigenPair, inverse_u, regularized) -> EnvelopeComparison:
    """Decay envelopes of one eigenfunction with w = 1/u and with w = V_t."""
    comparison = EnvelopeComparison(
        landscape=decay_envelope_check(pair, inverse_u, pair.lambda_),
        regularized=decay_envelope_check(pair, regularized, pair.lambda_),
    )
    logger.debug(
        f"Envelope offsets for pair {pair.index}: 1/u {comparison.landscape.offset:.4g}, "
        f"V_t {comparison.regularized.offset:.4g}"
    )
    return comparison
