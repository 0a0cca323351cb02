"""Lorenz curve estimation from sparse inequality indicators."""

__version__ = "0.1.0"

from .errors import (
    DegenerateConfigurationError,
    DomainError,
    EstimationInfeasibleError,
    KOutOfRangeError,
    LorenzError,
    NonConvergenceError,
    ValidationError,
)
from .models import KakwaniParams, LorenzCurve, WeightedParams, is_valid_lorenz
from .simple import TailShareObservation, estimate_simple, gini_from_p, p_from_gini
from .metrics import decile_shares, gini, tail_shares
from .fitting import LorenzPoints, fit_kakwani, fit_weighted, points_from_decile_shares
from .gof import GofReport, full_report
from .dataio import GroupedDistribution, builtin_dataset, parse_grouped_csv

__all__ = [
    "DegenerateConfigurationError", "DomainError", "EstimationInfeasibleError",
    "KOutOfRangeError", "LorenzError", "NonConvergenceError", "ValidationError",
    "KakwaniParams", "LorenzCurve", "WeightedParams", "is_valid_lorenz",
    "TailShareObservation", "estimate_simple", "gini_from_p", "p_from_gini",
    "decile_shares", "gini", "tail_shares",
    "LorenzPoints", "fit_kakwani", "fit_weighted", "points_from_decile_shares",
    "GofReport", "full_report",
    "GroupedDistribution", "builtin_dataset", "parse_grouped_csv",
]
