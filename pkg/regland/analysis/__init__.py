from ._exceptions import EmptyWindowError, PeakError, SweepError
from ._models import (
    EnvelopeComparison,
    EnvelopeReport,
    LocalizationReport,
    MatchRow,
    PeakSet,
    ResidualEntry,
    ResidualReport,
)
from .agmon import agmon_distance, agmon_profile, compare_envelopes, decay_envelope_check
from .peaks import detect_peaks, localization_match
from .residuals import (
    interior_window,
    kernel_comparison,
    loglog_slope,
    residual_sweep,
    thm1_residual,
    thm2_residual,
)

__all__ = [
    "ResidualEntry",
    "ResidualReport",
    "PeakSet",
    "MatchRow",
    "LocalizationReport",
    "EnvelopeReport",
    "EnvelopeComparison",
    "interior_window",
    "thm1_residual",
    "thm2_residual",
    "residual_sweep",
    "loglog_slope",
    "kernel_comparison",
    "agmon_profile",
    "agmon_distance",
    "decay_envelope_check",
    "compare_envelopes",
    "detect_peaks",
    "localization_match",
    "EmptyWindowError",
    "SweepError",
    "PeakError",
]

# Cleanup docs of unexported modules
_module = dir()
NOT_IN_ALL = [m for m in _module if m not in __all__]

__pdoc__ = {}

for n in NOT_IN_ALL:
    __pdoc__[n] = False
