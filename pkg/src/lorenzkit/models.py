"""Lorenz curve functional forms.

Two models are provided:

* :class:`WeightedParams` -- a weighted average of the power curve ``x**p``
  and the Pareto Lorenz curve ``1 - (1 - x)**(1/p)``, both of which have
  area ``1/(p+1)`` under them.
* :class:`KakwaniParams` -- Kakwani's three-parameter form
  ``x - a * x**alpha * (1 - x)**beta``.

Both are :class:`LorenzCurve` instances, so anything that needs "a curve"
(shares, Gini by quadrature, validity checks, fitting) can treat them the
same way: ``curve(x)`` evaluates the curve on scalars or arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError

__all__ = [
    "LorenzCurve",
    "WeightedParams",
    "KakwaniParams",
    "eval_weighted",
    "eval_kakwani",
    "weighted_derivative",
    "Validity",
    "is_valid_lorenz",
]


def _unit_interval(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    return arr


def _scalar_or_array(arr: np.ndarray, like):
    return float(arr) if np.ndim(like) == 0 else arr


class LorenzCurve:
    """Common interface of the parametric curves.

    Subclasses implement ``_raw(x)`` on an array already known to lie in
    [0, 1]; the endpoints are pinned to exactly 0 and 1 here.
    """

    name = "curve"

    def _raw(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x):
        arr = _unit_interval(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            y = self._raw(arr)
        y = np.where(arr == 0.0, 0.0, np.where(arr == 1.0, 1.0, y))
        return _scalar_or_array(y, x)

    def as_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class WeightedParams(LorenzCurve):
    """Weighted power / Pareto Lorenz curve.

    ``y(x) = (1 - weight) * x**exponent + weight * (1 - (1 - x)**(1/exponent))``

    Attributes
    ----------
    exponent : float
        Inequality exponent, ``>= 1``. It alone fixes the Gini index,
        ``(exponent - 1) / (exponent + 1)``.
    weight : float
        Share of the Pareto component, in [0, 1]. Changes the curvature
        without changing the Gini index.
    """

    exponent: float
    weight: float

    name = "weighted"

    def __post_init__(self):
        e, w = float(self.exponent), float(self.weight)
        if not np.isfinite(e) or e < 1.0:
            raise DomainError(f"exponent must be >= 1, got {self.exponent}")
        if not np.isfinite(w) or not 0.0 <= w <= 1.0:
            raise DomainError(f"weight must lie in [0, 1], got {self.weight}")
        object.__setattr__(self, "exponent", e)
        object.__setattr__(self, "weight", w)

    def _raw(self, x):
        p, k = self.exponent, self.weight
        return (1.0 - k) * x**p + k * (1.0 - (1.0 - x) ** (1.0 / p))

    def derivative(self, x):
        return weighted_derivative(self, x)

    def as_dict(self) -> dict:
        return {"model": self.name, "p": self.exponent, "k": self.weight}


@dataclass(frozen=True)
class KakwaniParams(LorenzCurve):
    """Kakwani's form ``y(x) = x - scale * x**alpha * (1 - x)**beta``.

    ``scale > 0`` and ``alpha, beta`` in (0, 1]. These box constraints do
    not by themselves make the curve monotone and convex; use
    :func:`is_valid_lorenz` for that.
    """

    scale: float
    alpha: float
    beta: float

    name = "kakwani"

    def __post_init__(self):
        a, al, be = float(self.scale), float(self.alpha), float(self.beta)
        if not np.isfinite(a) or a <= 0.0:
            raise DomainError(f"scale must be > 0, got {self.scale}")
        for label, v in (("alpha", al), ("beta", be)):
            if not np.isfinite(v) or not 0.0 < v <= 1.0:
                raise DomainError(f"{label} must lie in (0, 1], got {v}")
        object.__setattr__(self, "scale", a)
        object.__setattr__(self, "alpha", al)
        object.__setattr__(self, "beta", be)

    def _raw(self, x):
        return x - self.scale * x**self.alpha * (1.0 - x) ** self.beta

    def as_dict(self) -> dict:
        return {"model": self.name, "a": self.scale, "alpha": self.alpha, "beta": self.beta}


def eval_weighted(params: WeightedParams, x):
    """Evaluate the weighted curve at ``x`` (scalar or array in [0, 1])."""
    return params(x)


def eval_kakwani(params: KakwaniParams, x):
    """Evaluate Kakwani's curve at ``x`` (scalar or array in [0, 1])."""
    return params(x)


def weighted_derivative(params: WeightedParams, x):
    """Analytic slope of the weighted curve on the open interval (0, 1)."""
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise DomainError(f"derivative needs x in (0, 1), got {x!r}")
    p, k = params.exponent, params.weight
    d = (1.0 - k) * p * arr ** (p - 1.0) + (k / p) * (1.0 - arr) ** (1.0 / p - 1.0)
    return _scalar_or_array(d, x)


class Validity(NamedTuple):
    valid: bool
    reason: str | None = None
    x: float | None = None

    def __bool__(self) -> bool:
        return self.valid


# 1001 interior points; the endpoints are checked exactly and kept out of
# the difference tests.
_GRID = np.linspace(0.0, 1.0, 1003)[1:-1]
_GRID_TOL = -1e-12


def is_valid_lorenz(curve: LorenzCurve) -> Validity:
    """Check endpoints, monotonicity and convexity of ``curve``.

    ``y(0) = 0`` and ``y(1) = 1`` are tested exactly. Monotonicity and
    convexity are tested with first and second successive differences on
    1001 uniformly spaced interior points, tolerating -1e-12 of rounding
    noise. Returns a falsy :class:`Validity` naming the first failed check
    and where it happened instead of raising.

    Kakwani curves with ``alpha < 1`` start with infinite negative slope
    and dip slightly below zero just right of x = 0 (below x ~ 3e-3 for
    typical fits). The falling stretch is shorter than the grid spacing and
    no sign test is made, so such curves pass; this matches how those fits
    are used in practice.
    """
    y0, y1 = curve(0.0), curve(1.0)
    if y0 != 0.0:
        return Validity(False, f"y(0) = {y0!r}, expected 0", 0.0)
    if y1 != 1.0:
        return Validity(False, f"y(1) = {y1!r}, expected 1", 1.0)
    y = curve(_GRID)
    d1 = np.diff(y)
    bad = np.flatnonzero(d1 < _GRID_TOL)
    if bad.size:
        i = bad[0]
        return Validity(False, "not monotone non-decreasing", float(_GRID[i]))
    d2 = np.diff(d1)
    bad = np.flatnonzero(d2 < _GRID_TOL)
    if bad.size:
        i = bad[0] + 1
        return Validity(False, "not convex", float(_GRID[i]))
    return Validity(True)
