"""Goodness-of-fit statistics for actual vs. estimated income shares."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ValidationError
from .numerics import kolmogorov_q

__all__ = [
    "GofReport",
    "r_squared",
    "mse",
    "mae",
    "mas",
    "iim",
    "ks_two_sample",
    "full_report",
]

KS_METHOD = "asymptotic-stephens"


def _pair(actual, estimated) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=float).ravel()
    e = np.asarray(estimated, dtype=float).ravel()
    if a.shape != e.shape:
        raise ValidationError(f"length mismatch: {a.size} actual vs {e.size} estimated values")
    if a.size == 0:
        raise ValidationError("no values to compare")
    return a, e


def r_squared(actual, estimated) -> float:
    """Coefficient of determination ``1 - SSE/SST`` on the share values."""
    a, e = _pair(actual, estimated)
    sst = float(np.sum((a - a.mean()) ** 2))
    if sst == 0.0:
        raise DomainError("R^2 is undefined when the actual values are constant")
    return 1.0 - float(np.sum((a - e) ** 2)) / sst


def mse(actual, estimated) -> float:
    a, e = _pair(actual, estimated)
    return float(np.mean((a - e) ** 2))


def mae(actual, estimated) -> float:
    a, e = _pair(actual, estimated)
    return float(np.mean(np.abs(a - e)))


def mas(actual, estimated) -> float:
    """Maximum absolute error."""
    a, e = _pair(actual, estimated)
    return float(np.max(np.abs(a - e)))


def iim(actual, estimated) -> float:
    """Theil's information inaccuracy ``sum(a * ln(a / e))``.

    Non-negative whenever both vectors are positive and sum to one.
    """
    a, e = _pair(actual, estimated)
    if np.any(a <= 0.0) or np.any(e <= 0.0):
        raise DomainError("IIM needs strictly positive shares")
    return float(np.sum(a * np.log(a / e)))


def ks_two_sample(sample_a: Sequence[float], sample_b: Sequence[float]) -> tuple[float, float]:
    """Two-sample Kolmogorov-Smirnov statistic and p-value.

    The p-value is the Kolmogorov survival function at
    ``(sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * D`` with ``ne = n*m/(n+m)``
    (Stephens' small-sample correction of the asymptotic law).
    """
    a = np.sort(np.asarray(sample_a, dtype=float).ravel())
    b = np.sort(np.asarray(sample_b, dtype=float).ravel())
    if a.size == 0 or b.size == 0:
        raise ValidationError("K-S test needs two non-empty samples")
    pooled = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, pooled, side="right") / a.size
    cdf_b = np.searchsorted(b, pooled, side="right") / b.size
    d = float(np.max(np.abs(cdf_a - cdf_b)))
    ne = a.size * b.size / (a.size + b.size)
    root = math.sqrt(ne)
    lam = (root + 0.12 + 0.11 / root) * d
    return d, kolmogorov_q(lam)


@dataclass(frozen=True)
class GofReport:
    r_squared: float
    mse: float
    mae: float
    mas: float
    iim: float
    ks_d: float
    ks_p: float
    method: str = KS_METHOD

    def as_dict(self) -> dict:
        return asdict(self)


def full_report(actual, estimated) -> GofReport:
    a, e = _pair(actual, estimated)
    d, p = ks_two_sample(a, e)
    return GofReport(
        r_squared=r_squared(a, e),
        mse=mse(a, e),
        mae=mae(a, e),
        mas=mas(a, e),
        iim=iim(a, e),
        ks_d=d,
        ks_p=p,
    )
