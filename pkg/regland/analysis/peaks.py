import logging
from typing import Literal, Optional

import numpy as np
from scipy import signal

from ..eigen import EigenPair
from ._exceptions import PeakError
from ._models import LocalizationReport, MatchRow, PeakSet

logger = logging.getLogger(__name__)

# Default prominence threshold as a fraction of the field range.
RELATIVE_PROMINENCE = 0.1

DEFAULT_TOLERANCE = 60


def detect_peaks(
    field,
    mode: Literal["maxima", "minima"] = "maxima",
    prominence: Optional[float] = None,
) -> PeakSet:
    """
    Strict local extrema of `field` whose prominence reaches `prominence`,
    by default 10% of the field range. Minima are the maxima of -field.
    End nodes are never reported.

    Raises:
        PeakError: prominence ≤ 0.
    """
    values = np.asarray(field, dtype=float)
    if mode == "minima":
        values = -values

    if prominence is None:
        prominence = max(RELATIVE_PROMINENCE * float(np.ptp(values)), np.finfo(float).tiny)
    elif prominence <= 0:
        raise PeakError(f"prominence must be positive, got {prominence}")

    indices, properties = signal.find_peaks(values, prominence=prominence)
    return PeakSet(
        mode=mode,
        indices=indices,
        prominences=properties["prominences"],
        prominence=prominence,
    )


def localization_match(
    pairs: list[EigenPair],
    u,
    V_t,
    tolerance_nodes: int = DEFAULT_TOLERANCE,
    V=None,
    gaussian=None,
) -> LocalizationReport:
    """
    For each eigenpair, the distance in nodes from argmax |φ| to the nearest
    predicted location of every predictor:

    - "landscape": maxima of u (the minima of 1/u);
    - "regularized": minima of V_t;
    - "potential": minima of the raw V, when given;
    - "gaussian": minima of V∗g_t, when given.

    A pair matches a predictor when the distance is at most `tolerance_nodes`.
    """
    if not pairs:
        raise PeakError("localization_match needs at least one eigenpair")

    predictors = {
        "landscape": detect_peaks(u, "maxima"),
        "regularized": detect_peaks(V_t, "minima"),
    }
    if V is not None:
        predictors["potential"] = detect_peaks(V, "minima")
    if gaussian is not None:
        predictors["gaussian"] = detect_peaks(gaussian, "minima")

    rows = [
        MatchRow(
            index=pair.index,
            peak=pair.peak,
            distances={name: peaks.nearest(pair.peak) for name, peaks in predictors.items()},
        )
        for pair in pairs
    ]
    counts = {
        name: sum(
            1
            for row in rows
            if row.distances[name] is not None and row.distances[name] <= tolerance_nodes
        )
        for name in predictors
    }

    logger.info(f"Localization matches within {tolerance_nodes} nodes: {counts}")
    return LocalizationReport(tolerance=tolerance_nodes, rows=rows, counts=counts)
