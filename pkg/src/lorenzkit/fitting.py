"""Least-squares fitting of the weighted and Kakwani forms to grouped data.

Both fits run Nelder-Mead in unconstrained coordinates that map onto the
parameter boxes (``p = 1 + exp(u)``, ``k = logistic(v)``, ``a = exp(u)``,
``alpha, beta = logistic(.)``) from a fixed grid of starting points, so the
result is deterministic. The default objective is the squared error of
the cumulative ordinates at the interior points; ``objective="shares"``
uses the per-group shares instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import EstimationInfeasibleError, NonConvergenceError, ValidationError
from .models import KakwaniParams, LorenzCurve, WeightedParams, is_valid_lorenz
from .numerics import MinimizeResult, SimplexConfig, nelder_mead

__all__ = [
    "LorenzPoints",
    "FitResult",
    "points_from_decile_shares",
    "sse_objective",
    "fit_weighted",
    "fit_kakwani",
    "WEIGHTED_STARTS",
    "KAKWANI_STARTS",
]

OBJECTIVES = ("cumulative", "shares")

WEIGHTED_STARTS = tuple((p, k) for p in (1.2, 2.0, 4.0) for k in (0.2, 0.5, 0.8))
KAKWANI_STARTS = tuple(
    (a, al, be) for a in (0.3, 0.7, 1.2) for al in (0.5, 0.9) for be in (0.3, 0.7)
)

# alpha/beta are never exactly 1 under the logistic map, so the edges of the
# box get their own lower-dimensional fits.
_BOUNDARY_FIXES = ((1.0, None), (None, 1.0), (1.0, 1.0))

_SLACK = 1e-9


@dataclass(frozen=True)
class LorenzPoints:
    """Observed interior points of a Lorenz curve.

    Endpoints ``(0, 0)`` and ``(1, 1)`` are dropped on construction; every
    model satisfies them exactly.
    """

    x: tuple[float, ...]
    y: tuple[float, ...]

    def __post_init__(self):
        if len(self.x) != len(self.y):
            raise ValidationError("x and y must have equal lengths")
        xs, ys = [], []
        for xi, yi in zip(self.x, self.y):
            xi, yi = float(xi), float(yi)
            if not (math.isfinite(xi) and math.isfinite(yi)):
                raise ValidationError(f"non-finite point ({xi}, {yi})")
            if (xi == 0.0 and yi == 0.0) or (xi == 1.0 and yi == 1.0):
                continue
            if not (0.0 < xi < 1.0 and 0.0 <= yi <= 1.0):
                raise ValidationError(f"point ({xi}, {yi}) lies outside the unit square")
            xs.append(xi)
            ys.append(yi)
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValidationError("x must be strictly increasing")
        if any(b < a - _SLACK for a, b in zip(ys, ys[1:])):
            raise ValidationError("y must be non-decreasing")
        for xi, yi in zip(xs, ys):
            if yi > xi + _SLACK:
                raise ValidationError(f"point ({xi}, {yi}) lies above the equality line")
        object.__setattr__(self, "x", tuple(xs))
        object.__setattr__(self, "y", tuple(ys))

    def __len__(self) -> int:
        return len(self.x)

    @property
    def xa(self) -> np.ndarray:
        return np.asarray(self.x)

    @property
    def ya(self) -> np.ndarray:
        return np.asarray(self.y)


@dataclass(frozen=True)
class FitResult:
    params: LorenzCurve
    sse: float
    r_squared: float
    converged: bool
    starts_tried: int
    objective: str = "cumulative"
    extra: dict = field(default_factory=dict, compare=False)


def points_from_decile_shares(shares: Sequence[float], tol: float = 1e-3) -> LorenzPoints:
    """Cumulate ten decile shares into the nine interior Lorenz points.

    Shares are used as given (no renormalisation). Their total must be
    within ``tol`` of one; published tables are rounded, so the default
    allows 1e-3.
    """
    s = np.asarray(shares, dtype=float).ravel()
    if s.size != 10:
        raise ValidationError(f"expected 10 decile shares, got {s.size}")
    if np.any(s < 0.0) or not np.all(np.isfinite(s)):
        raise ValidationError("decile shares must be finite and non-negative")
    total = float(s.sum())
    if abs(total - 1.0) > tol:
        raise ValidationError(f"decile shares sum to {total:.6g}, expected 1 within {tol:g}")
    cum = np.cumsum(s)[:9]
    return LorenzPoints(tuple(np.arange(1, 10) / 10.0), tuple(cum))


def _residual_fn(points: LorenzPoints, objective: str) -> Callable[[np.ndarray], np.ndarray]:
    if objective not in OBJECTIVES:
        raise ValidationError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    y = points.ya
    if objective == "cumulative":
        return lambda fitted: y - fitted
    observed = np.diff(np.concatenate(([0.0], y, [1.0])))
    return lambda fitted: observed - np.diff(np.concatenate(([0.0], fitted, [1.0])))


def sse_objective(curve: LorenzCurve, points: LorenzPoints, objective: str = "cumulative") -> float:
    """Sum of squared errors of ``curve`` against ``points``."""
    resid = _residual_fn(points, objective)(np.asarray(curve(points.xa)))
    return float(np.dot(resid, resid))


def _r_squared(points: LorenzPoints, objective: str, sse: float) -> float:
    y = points.ya
    obs = y if objective == "cumulative" else np.diff(np.concatenate(([0.0], y, [1.0])))
    sst = float(np.sum((obs - obs.mean()) ** 2))
    return 1.0 - sse / sst if sst > 0.0 else (1.0 if sse == 0.0 else -math.inf)


def _logistic(v: float) -> float:
    if v >= 0:
        return 1.0 / (1.0 + math.exp(-v))
    e = math.exp(v)
    return e / (1.0 + e)


def _logit(p: float) -> float:
    return math.log(p / (1.0 - p))


@dataclass
class _Attempt:
    index: int
    result: MinimizeResult
    params: LorenzCurve


def _pick(attempts: list[_Attempt]) -> list[_Attempt]:
    # ties broken by lowest sse, then lowest start index
    return sorted(attempts, key=lambda t: (t.result.objective_value, t.index))


def fit_weighted(
    points: LorenzPoints,
    config: SimplexConfig | None = None,
    objective: str = "cumulative",
    initial: WeightedParams | None = None,
) -> FitResult:
    """Least-squares fit of the weighted power/Pareto form.

    Parameters
    ----------
    points : LorenzPoints
        At least three interior points.
    config : SimplexConfig, optional
    objective : {"cumulative", "shares"}
    initial : WeightedParams, optional
        Extra starting point (typically the closed-form estimate), tried
        after the fixed 3x3 grid.

    Raises
    ------
    NonConvergenceError
        If no start converged; ``best`` holds the best :class:`FitResult`.
    """
    if len(points) < 3:
        raise ValidationError(f"fit_weighted needs at least 3 points, got {len(points)}")
    cfg = config or SimplexConfig()
    x = points.xa
    resid = _residual_fn(points, objective)
    lx = np.log(x)
    l1x = np.log1p(-x)

    def unpack(z):
        return 1.0 + math.exp(z[0]), _logistic(z[1])

    def f(z):
        p, k = unpack(z)
        fitted = (1.0 - k) * np.exp(p * lx) + k * (1.0 - np.exp(l1x / p))
        r = resid(fitted)
        return float(np.dot(r, r))

    starts = list(WEIGHTED_STARTS)
    if initial is not None:
        p0 = max(initial.exponent, 1.0 + 1e-6)
        k0 = min(max(initial.weight, 1e-6), 1.0 - 1e-6)
        starts.append((p0, k0))

    attempts = []
    for i, (p0, k0) in enumerate(starts):
        res = nelder_mead(f, [math.log(p0 - 1.0), _logit(k0)], cfg)
        p, k = unpack(res.argmin)
        attempts.append(_Attempt(i, res, WeightedParams(p, k)))

    return _finish(attempts, points, objective, len(starts), validate=False)


def fit_kakwani(
    points: LorenzPoints,
    config: SimplexConfig | None = None,
    objective: str = "cumulative",
) -> FitResult:
    """Least-squares fit of Kakwani's form.

    Runs the 3x2x2 start grid in the interior of the box, then repeats the
    grid with ``alpha = 1``, ``beta = 1`` and both fixed. The lowest-error
    result whose curve passes :func:`is_valid_lorenz` is returned.
    """
    if len(points) < 4:
        raise ValidationError(f"fit_kakwani needs at least 4 points, got {len(points)}")
    cfg = config or SimplexConfig()
    x = points.xa
    resid = _residual_fn(points, objective)
    lx = np.log(x)
    l1x = np.log1p(-x)

    attempts = []
    index = 0
    for fix_alpha, fix_beta in ((None, None),) + _BOUNDARY_FIXES:
        free = [fix_alpha is None, fix_beta is None]

        def unpack(z, fix_alpha=fix_alpha, fix_beta=fix_beta):
            it = iter(z[1:])
            al = _logistic(next(it)) if fix_alpha is None else fix_alpha
            be = _logistic(next(it)) if fix_beta is None else fix_beta
            return math.exp(z[0]), al, be

        def f(z, unpack=unpack):
            a, al, be = unpack(z)
            if al <= 0.0 or be <= 0.0:
                return math.inf
            fitted = x - a * np.exp(al * lx + be * l1x)
            r = resid(fitted)
            return float(np.dot(r, r))

        seen = set()
        for a0, al0, be0 in KAKWANI_STARTS:
            z0 = [math.log(a0)]
            if free[0]:
                z0.append(_logit(al0))
            if free[1]:
                z0.append(_logit(be0))
            key = tuple(z0)
            if key in seen:
                continue
            seen.add(key)
            res = nelder_mead(f, z0, cfg)
            try:
                params = KakwaniParams(*unpack(res.argmin))
            except ValueError:
                continue
            attempts.append(_Attempt(index, res, params))
            index += 1

    return _finish(attempts, points, objective, index, validate=True)


def _finish(attempts, points, objective, tried, validate) -> FitResult:
    ranked = _pick(attempts)
    converged = [t for t in ranked if t.result.converged]

    def build(t: _Attempt) -> FitResult:
        sse = sse_objective(t.params, points, objective)
        return FitResult(
            params=t.params,
            sse=sse,
            r_squared=_r_squared(points, objective, sse),
            converged=t.result.converged,
            starts_tried=tried,
            objective=objective,
            extra={"start_index": t.index, "iterations": t.result.iterations},
        )

    if not converged:
        best = build(ranked[0]) if ranked else None
        raise NonConvergenceError(f"none of {tried} starts converged", best=best)
    if not validate:
        return build(converged[0])
    for t in converged:
        if is_valid_lorenz(t.params):
            return build(t)
    raise EstimationInfeasibleError("no start produced a valid Lorenz curve")
