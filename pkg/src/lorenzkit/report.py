"""End-to-end estimation pipeline and the tabular reports built from it.

Every function here returns plain row dictionaries so the CLI can render
them as an aligned table, CSV or JSON lines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataio import GroupedDistribution
from .fitting import FitResult, fit_kakwani, fit_weighted, points_from_decile_shares
from .errors import LorenzError
from .gof import GofReport, full_report
from .metrics import GiniValue, decile_shares, gini, gini_trapezoid
from .models import LorenzCurve
from .numerics import SimplexConfig
from .simple import SimpleEstimate, TailShareObservation, estimate_simple

__all__ = [
    "SimpleRun",
    "FitRun",
    "best_tail",
    "run_simple",
    "run_fit",
    "simple_rows",
    "fit_rows",
    "decile_rows",
    "gof_rows",
    "gini_rows",
    "comparison_report",
]

DECILE_LABELS = tuple(f"D{i}" for i in range(1, 11))
GOF_FIELDS = ("r_squared", "mse", "mae", "mas", "iim", "ks_d", "ks_p")


@dataclass(frozen=True)
class SimpleRun:
    record: GroupedDistribution
    observation: TailShareObservation
    estimate: SimpleEstimate
    shares: np.ndarray
    gof: GofReport | None


@dataclass(frozen=True)
class FitRun:
    record: GroupedDistribution
    model: str
    fit: FitResult
    shares: np.ndarray
    gof: GofReport
    gini: GiniValue
    gini_trapezoid: GiniValue


def best_tail(record: GroupedDistribution, m: float) -> TailShareObservation:
    """Most precise tail observation available for fraction ``m``.

    For ``m = 0.1`` with decile data, the first and last decile *are* the
    bottom and top 10% and are published with more digits than the tail
    columns, so they win. Otherwise the stored observation is used (and
    its published ratio, if any).
    """
    if abs(m - 0.1) < 1e-12 and record.decile_shares is not None:
        return record.decile_tail()
    obs = record.tail(m)
    if obs is None:
        raise LookupError(f"{record.country} {record.year} has no {m:.0%} tail shares")
    return obs


def run_simple(
    record: GroupedDistribution,
    m: float = 0.1,
    clamp: bool = False,
    observation: TailShareObservation | None = None,
) -> SimpleRun:
    obs = observation or best_tail(record, m)
    est = estimate_simple(record.gini, obs, clamp=clamp)
    shares = decile_shares(est.params)
    gof = full_report(record.decile_shares, shares) if record.decile_shares is not None else None
    return SimpleRun(record, obs, est, shares, gof)


def run_fit(
    record: GroupedDistribution,
    model: str = "weighted",
    objective: str = "cumulative",
    config: SimplexConfig | None = None,
) -> FitRun:
    if record.decile_shares is None:
        raise LookupError(f"{record.country} {record.year} has no decile shares")
    points = points_from_decile_shares(record.decile_shares)
    if model == "weighted":
        initial = None
        try:
            initial = run_simple(record).estimate.params
        except (LorenzError, LookupError):  # closed-form start is optional
            pass
        fit = fit_weighted(points, config, objective, initial=initial)
    elif model == "kakwani":
        fit = fit_kakwani(points, config, objective)
    else:
        raise ValueError(f"unknown model {model!r}")
    shares = decile_shares(fit.params)
    return FitRun(
        record, model, fit, shares,
        full_report(record.decile_shares, shares),
        gini(fit.params),
        gini_trapezoid(fit.params),
    )


def _params_row(curve: LorenzCurve) -> dict:
    d = curve.as_dict()
    d.pop("model")
    return d


def simple_rows(runs: list[SimpleRun]) -> list[dict]:
    rows = []
    for r in runs:
        p = r.estimate.params
        rows.append({
            "year": r.record.year,
            "country": r.record.country,
            "gini": r.record.gini,
            "m": r.observation.m,
            "bottom": r.observation.bottom_share,
            "top": r.observation.top_share,
            "ratio": r.observation.ratio,
            "p": p.exponent,
            "k": p.weight,
            "r_squared": r.gof.r_squared if r.gof else None,
            "degenerate": r.estimate.degenerate,
            "clamped": r.estimate.clamped,
        })
    return rows


def fit_rows(runs: list[FitRun]) -> list[dict]:
    rows = []
    for r in runs:
        row = {"year": r.record.year, "country": r.record.country, "model": r.model}
        row.update(_params_row(r.fit.params))
        row.update({
            "sse": r.fit.sse,
            "r_squared": r.gof.r_squared,
            "gini_observed": r.record.gini,
            "gini_estimated": r.gini.value,
            "gini_method": r.gini.method,
            "converged": r.fit.converged,
        })
        rows.append(row)
    return rows


def decile_rows(columns: dict[str, np.ndarray | tuple]) -> list[dict]:
    """One row per decile; ``columns`` maps a column label to 10 shares."""
    rows = []
    for i, label in enumerate(DECILE_LABELS):
        row = {"decile": label}
        for name, values in columns.items():
            row[name] = float(values[i])
        rows.append(row)
    return rows


def gof_rows(reports: dict[str, GofReport]) -> list[dict]:
    rows = []
    for label, rep in reports.items():
        row = {"label": label}
        row.update({f: getattr(rep, f) for f in GOF_FIELDS})
        rows.append(row)
    return rows


def gini_rows(weighted: list[FitRun], kakwani: list[FitRun]) -> list[dict]:
    rows = []
    for w, k in zip(weighted, kakwani):
        rows.append({
            "country": w.record.country,
            "observed": w.record.gini,
            "weighted_closed": w.gini.value,
            "kakwani_beta": k.gini.value,
            "kakwani_trapezoid": k.gini_trapezoid.value,
        })
    return rows


def _per_country_deciles(runs, label: str) -> list[dict]:
    cols = {}
    for r in runs:
        cols[f"{r.record.country}:actual"] = r.record.decile_shares
        cols[f"{r.record.country}:{label}"] = r.shares
    return decile_rows(cols)


def comparison_report(records: list[GroupedDistribution], config: SimplexConfig | None = None) -> dict:
    """Run the whole comparison on ``records``.

    Returns a dict of named tables (lists of row dicts) plus the raw runs
    under ``"runs"``: simple method with 10% and 5% tails, weighted and
    Kakwani least-squares fits, and their side-by-side comparison.
    """
    simple10 = [run_simple(r, 0.1) for r in records]
    simple5 = [run_simple(r, 0.05) for r in records]
    weighted = [run_fit(r, "weighted", config=config) for r in records]
    kakwani = [run_fit(r, "kakwani", config=config) for r in records]

    compare_cols = {}
    for w, k in zip(weighted, kakwani):
        c = w.record.country
        compare_cols[f"{c}:actual"] = w.record.decile_shares
        compare_cols[f"{c}:weighted"] = w.shares
        compare_cols[f"{c}:kakwani"] = k.shares

    tables = {
        "simple_10": simple_rows(simple10),
        "simple_10_deciles": _per_country_deciles(simple10, "estimate"),
        "simple_10_gof": gof_rows({r.record.country: r.gof for r in simple10}),
        "simple_5": simple_rows(simple5),
        "simple_5_deciles": _per_country_deciles(simple5, "estimate"),
        "simple_5_gof": gof_rows({r.record.country: r.gof for r in simple5}),
        "weighted_fit": fit_rows(weighted),
        "weighted_fit_deciles": _per_country_deciles(weighted, "estimate"),
        "weighted_fit_gof": gof_rows({r.record.country: r.gof for r in weighted}),
        "kakwani_fit": fit_rows(kakwani),
        "compare_deciles": decile_rows(compare_cols),
        "compare_gof": gof_rows({
            f"{w.record.country}:{m.model}": m.gof
            for w, k in zip(weighted, kakwani) for m in (w, k)
        }),
        "compare_gini": gini_rows(weighted, kakwani),
    }
    return {"tables": tables, "runs": {
        "simple_10": simple10, "simple_5": simple5,
        "weighted": weighted, "kakwani": kakwani,
    }}
