"""
Acceptance gates.

A gate is a listener of ExperimentEvents.Gate: it receives the Experiment,
returns a GateResult when the artifacts it needs exist and None otherwise.
"""

import numpy as np

from ..analysis import detect_peaks
from ..landscape import inverse_landscape, landscape_bound_violation
from ._models import GateResult

LANDSCAPE_BOUND_SLACK = 1e-8
IDENTITY_TOLERANCE = 1e-10
EFFECTIVE_TOLERANCE = 1e-12

# Eigenpairs and peaks taken into account by the localization gates.
LOCALIZED_PAIRS = 3


def landscape_bound(experiment) -> GateResult | None:
    state = experiment.state
    if not state.pairs or state.landscape is None:
        return None
    violation = landscape_bound_violation(state.pairs, state.landscape)
    return GateResult(
        name="landscape-bound",
        passed=violation <= LANDSCAPE_BOUND_SLACK,
        detail=f"worst (|phi| - lambda u |phi|_inf) / (lambda |u|_inf) = {violation:.3e}",
        value=violation,
    )


def residual_identity(experiment) -> GateResult | None:
    entries = [entry for _, _, entry in experiment.state.residuals]
    if not entries:
        return None
    worst = max(entry.identity_error for entry in entries)
    return GateResult(
        name="residual-identity",
        passed=worst <= IDENTITY_TOLERANCE,
        detail=f"worst relative identity error {worst:.3e} over {len(entries)} residuals",
        value=worst,
    )


def localization(experiment) -> GateResult | None:
    report = experiment.state.matches
    if report is None:
        return None

    leading = report.rows[:LOCALIZED_PAIRS]
    predictors = [name for name in ("landscape", "regularized") if name in report.counts]
    missed = [
        f"{name}:{row.index}"
        for name in predictors
        for row in leading
        if row.distances[name] is None or row.distances[name] > report.tolerance
    ]
    ordered = report.counts.get("regularized", 0) >= report.counts.get("potential", 0)
    return GateResult(
        name="localization",
        passed=not missed and ordered,
        detail=f"counts {report.counts}, missed {missed or 'none'}",
        value=report.counts,
    )


def generalized(experiment) -> GateResult | None:
    state = experiment.state
    if state.effective is None or state.landscape is None:
        return None

    if state.generalized is None:
        classical = inverse_landscape(state.landscape)
        error = float(np.max(np.abs(state.effective - classical) / classical))
        return GateResult(
            name="generalized",
            passed=error <= EFFECTIVE_TOLERANCE,
            detail=f"constant f: max relative distance to 1/u {error:.3e}",
            value=error,
        )

    tolerance = experiment.config.tolerance_nodes
    predicted = detect_peaks(1.0 / state.effective, "maxima").top(LOCALIZED_PAIRS)
    reference = detect_peaks(state.landscape.values, "maxima").top(LOCALIZED_PAIRS)
    distances = [int(np.min(np.abs(reference - node))) if len(reference) else None for node in predicted]
    passed = len(predicted) > 0 and all(d is not None and d <= tolerance for d in distances)
    return GateResult(
        name="generalized",
        passed=passed,
        detail=f"top peaks of v/(f*k_t) {predicted.tolist()} vs u {reference.tolist()}",
        value=distances,
    )


def monte_carlo(experiment) -> GateResult | None:
    state = experiment.state
    if not state.mc_checks and state.khasminskii is None:
        return None

    failed = [f"{check.name}@{check.x:.4g}" for check in state.mc_checks if not check.passed]
    if state.khasminskii is not None and state.khasminskii.passed is False:
        failed.append("khasminskii")
    return GateResult(
        name="monte-carlo",
        passed=not failed,
        detail=f"{len(state.mc_checks)} checks, failed {failed or 'none'}",
        value=failed,
    )


DEFAULT_GATES = {
    "landscape-bound": landscape_bound,
    "residual-identity": residual_identity,
    "localization": localization,
    "generalized": generalized,
    "monte-carlo": monte_carlo,
}
