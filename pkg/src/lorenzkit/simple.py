"""Closed-form estimation of the weighted Lorenz curve from three numbers.

The Gini index alone fixes the exponent, ``p = (1 + G) / (1 - G)``. The
ratio of the bottom-m to top-m income shares then fixes the weight ``k``
through a linear equation, so no optimizer is involved. Only the ratio is
matched: the estimated curve reproduces ``bottom / top`` exactly, not the
two shares individually.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateConfigurationError, DomainError, KOutOfRangeError
from .models import WeightedParams

__all__ = [
    "TailShareObservation",
    "RatioCoefficients",
    "SimpleEstimate",
    "p_from_gini",
    "gini_from_p",
    "ratio_coefficients",
    "k_from_ratio",
    "estimate_simple",
]

_DEGENERATE_P = 1e-12
_DENOMINATOR_FLOOR = 1e-12
# k for the equality line, where every weight gives the same curve
_DEGENERATE_K = 0.5
# round-off allowance at the ends of [0, 1]; solutions this close are snapped
_K_SNAP = 1e-10


@dataclass(frozen=True)
class TailShareObservation:
    """Income shares of the poorest and richest fraction ``m`` of the population.

    ``published_ratio`` optionally carries a bottom/top ratio published
    alongside the shares. Statistical agencies compute it from unrounded
    shares, so it can be more precise than ``bottom_share / top_share``;
    when present, :meth:`ratio` returns it.
    """

    m: float
    bottom_share: float
    top_share: float
    published_ratio: float | None = None

    def __post_init__(self):
        if not 0.0 < self.m < 0.5:
            raise DomainError(f"tail fraction m must lie in (0, 0.5), got {self.m}")
        b, t = self.bottom_share, self.top_share
        # equal shares are allowed: that is the equality line
        if not 0.0 < b <= t < 1.0:
            raise DomainError(
                f"need 0 < bottom <= top < 1, got bottom={b}, top={t} (m={self.m})"
            )
        if b + t >= 1.0:
            raise DomainError(f"bottom + top must be < 1, got {b + t}")
        if self.published_ratio is not None and not self.published_ratio > 0.0:
            raise DomainError(f"published ratio must be > 0, got {self.published_ratio}")

    @property
    def ratio(self) -> float:
        if self.published_ratio is not None:
            return self.published_ratio
        return self.bottom_share / self.top_share


@dataclass(frozen=True)
class RatioCoefficients:
    a: float  # m**p
    b: float  # (1 - m)**(1/p)
    c: float  # n**p, n = 1 - m
    d: float  # (1 - n)**(1/p)
    ratio: float | None = None


@dataclass(frozen=True)
class SimpleEstimate:
    params: WeightedParams
    degenerate: bool = False
    clamped: bool = False
    raw_k: float | None = None


def p_from_gini(gini: float) -> float:
    """Exponent of the weighted curve whose Gini index equals ``gini``."""
    if not (0.0 <= gini < 1.0):
        raise DomainError(f"Gini index must lie in [0, 1), got {gini}")
    return (1.0 + gini) / (1.0 - gini)


def gini_from_p(p: float) -> float:
    if not p >= 1.0 or not math.isfinite(p):
        raise DomainError(f"exponent must be >= 1, got {p}")
    return (p - 1.0) / (p + 1.0)


def ratio_coefficients(p: float, m: float) -> RatioCoefficients:
    if not p >= 1.0:
        raise DomainError(f"exponent must be >= 1, got {p}")
    if not 0.0 < m < 0.5:
        raise DomainError(f"tail fraction m must lie in (0, 0.5), got {m}")
    n = 1.0 - m
    return RatioCoefficients(
        a=m**p,
        b=(1.0 - m) ** (1.0 / p),
        c=n**p,
        d=(1.0 - n) ** (1.0 / p),
    )


def k_from_ratio(p: float, m: float, ratio: float) -> float:
    """Weight ``k`` that makes the curve's bottom/top share ratio equal ``ratio``.

    Raises
    ------
    DegenerateConfigurationError
        If the linear equation for ``k`` has a vanishing coefficient
        (e.g. ``p == 1``, where every ``k`` gives the diagonal).
    KOutOfRangeError
        If the solution lies outside [0, 1]; ``raw_k`` holds it.
    """
    if not ratio > 0.0:
        raise DomainError(f"share ratio must be > 0, got {ratio}")
    co = ratio_coefficients(p, m)
    num = co.a - ratio + co.c * ratio
    den = co.c * ratio - ratio + co.d * ratio + co.a + co.b - 1.0
    if abs(den) < _DENOMINATOR_FLOOR:
        raise DegenerateConfigurationError(
            f"k is undetermined for p={p}, m={m}, ratio={ratio} (denominator {den:.3g})"
        )
    k = num / den
    if not -_K_SNAP <= k <= 1.0 + _K_SNAP:
        raise KOutOfRangeError(k)
    return min(max(k, 0.0), 1.0)


def estimate_simple(
    gini: float, observation: TailShareObservation, clamp: bool = False
) -> SimpleEstimate:
    """Estimate the weighted curve from the Gini index and one tail-share pair.

    A zero Gini index gives the equality line; ``k`` is then arbitrary and
    set to 0.5 with ``degenerate=True``. With ``clamp=True`` an
    out-of-range ``k`` is moved to the nearest bound instead of raising.
    """
    p = p_from_gini(gini)
    if p - 1.0 <= _DEGENERATE_P:
        return SimpleEstimate(WeightedParams(1.0, _DEGENERATE_K), degenerate=True)
    try:
        k = k_from_ratio(p, observation.m, observation.ratio)
    except KOutOfRangeError as exc:
        if not clamp:
            raise
        bounded = min(1.0, max(0.0, exc.raw_k))
        return SimpleEstimate(WeightedParams(p, bounded), clamped=True, raw_k=exc.raw_k)
    return SimpleEstimate(WeightedParams(p, k), raw_k=k)
