"""Command-line interface.

    lorenzkit simple  --gini G --m M --bottom B --top T [--actual FILE]
    lorenzkit fit     (--input FILE | --builtin) [--model weighted|kakwani]
    lorenzkit compare (--input FILE | --builtin)
    lorenzkit curve   --model weighted --p P --k K [--samples N]
    lorenzkit gini    --model kakwani --a A --alpha AL --beta BE [--method beta]
    lorenzkit report  --paper

Exit codes: 0 success, 2 input/validation error, 3 estimation infeasible,
4 non-convergence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import IO, Sequence

import numpy as np

from . import __version__
from .dataio import (
    GroupedDistribution,
    builtin_dataset,
    format_number,
    parse_grouped_csv,
    write_report_csv,
)
from .errors import (
    DomainError,
    EstimationInfeasibleError,
    KOutOfRangeError,
    NonConvergenceError,
    ValidationError,
)
from .gof import full_report
from .metrics import decile_shares, gini
from .models import KakwaniParams, WeightedParams
from .report import (
    decile_rows,
    fit_rows,
    gini_rows,
    gof_rows,
    comparison_report,
    run_fit,
    simple_rows,
)
from .simple import TailShareObservation, estimate_simple

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_NONCONVERGENCE = 4

PARAM_COLUMNS = ("p", "k", "a", "alpha", "beta")
DEFAULT_PARAM_PRECISION = 2
FIXED_PRECISION = {
    "bottom": 4, "top": 4, "ratio": 3, "m": 2,
    "gini": 3, "observed": 3, "gini_observed": 3, "gini_estimated": 3,
    "weighted_closed": 3, "kakwani_beta": 3, "kakwani_trapezoid": 3,
    "r_squared": 4, "mse": 6, "mae": 4, "mas": 4, "iim": 4,
    "ks_d": 4, "ks_p": 3, "x": 4, "y": 4, "diagonal": 4,
}


class _Section:
    __slots__ = ("name", "rows")

    def __init__(self, name: str, rows: list[dict]):
        self.name = name
        self.rows = rows


def _param_precision(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("LORENZ_PRECISION")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"LORENZ_PRECISION must be an integer, got {env!r}") from None
    return DEFAULT_PARAM_PRECISION


def _precision_map(rows: list[dict], param_digits: int) -> dict[str, int]:
    prec = dict(FIXED_PRECISION)
    prec.update({c: param_digits for c in PARAM_COLUMNS})
    for row in rows:
        for col in row:
            # decile share columns (D1..., "Malta:actual", ...) print at 4 decimals
            if ":" in col or col.lower().startswith("estimate") or col == "actual":
                prec[col] = 4
    return prec


def _columns(rows: list[dict]) -> list[str]:
    cols: list[str] = []
    for row in rows:
        for c in row:
            if c not in cols:
                cols.append(c)
    return cols


def _render(sections: list[_Section], fmt: str, param_digits: int, out: IO[str]) -> None:
    if fmt == "json-lines":
        for s in sections:
            for row in s.rows:
                rec = {"table": s.name}
                rec.update({k: (float(v) if isinstance(v, np.floating) else v) for k, v in row.items()})
                out.write(json.dumps(rec, ensure_ascii=False, sort_keys=False) + "\n")
        return
    for i, s in enumerate(sections):
        prec = _precision_map(s.rows, param_digits)
        cols = _columns(s.rows)
        if fmt == "csv":
            if len(sections) > 1:
                if i:
                    out.write("\r\n")
                out.write(f"# {s.name}\r\n")
            write_report_csv(s.rows, out, cols, prec)
            continue
        if i:
            out.write("\n")
        out.write(f"[{s.name}]\n")
        cells = [[format_number(r.get(c), prec.get(c)) for c in cols] for r in s.rows]
        widths = [max([len(c)] + [len(row[j]) for row in cells]) for j, c in enumerate(cols)]
        out.write("  ".join(c.rjust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
        for row in cells:
            out.write("  ".join(v.rjust(w) for v, w in zip(row, widths)).rstrip() + "\n")


# --------------------------------------------------------------------------
# input helpers
# --------------------------------------------------------------------------

def _load_records(args) -> list[GroupedDistribution]:
    if args.builtin:
        return builtin_dataset()
    if args.input == "-":
        return parse_grouped_csv(sys.stdin)
    try:
        with open(args.input, encoding="utf-8") as fh:
            return parse_grouped_csv(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {args.input}: {exc.strerror}") from None


def _curve_from_args(args):
    if args.model == "weighted":
        if args.p is None or args.k is None:
            raise ValidationError("--model weighted needs --p and --k")
        return WeightedParams(args.p, args.k)
    if args.a is None or args.alpha is None or args.beta is None:
        raise ValidationError("--model kakwani needs --a, --alpha and --beta")
    return KakwaniParams(args.a, args.alpha, args.beta)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_simple(args, out, err) -> int:
    obs = TailShareObservation(args.m, args.bottom, args.top, args.ratio)
    est = estimate_simple(args.gini, obs, clamp=args.clamp)
    p = est.params
    shares = decile_shares(p)
    params_row = {
        "gini": args.gini, "m": args.m, "bottom": args.bottom, "top": args.top,
        "ratio": obs.ratio, "p": p.exponent, "k": p.weight,
        "degenerate": est.degenerate, "clamped": est.clamped,
    }
    if est.clamped:
        params_row["raw_k"] = est.raw_k
    sections = [_Section("parameters", [params_row])]
    cols = {"estimate": shares}
    if args.actual:
        with open(args.actual, encoding="utf-8") as fh:
            recs = [r for r in parse_grouped_csv(fh) if r.decile_shares is not None]
        if not recs:
            raise ValidationError(f"{args.actual} holds no record with decile shares")
        actual = recs[0].decile_shares
        cols = {"actual": actual, "estimate": shares}
        sections.append(_Section("deciles", decile_rows(cols)))
        sections.append(_Section("fit", gof_rows({recs[0].country: full_report(actual, shares)})))
    else:
        sections.append(_Section("deciles", decile_rows(cols)))
    if est.degenerate:
        err.write("note: Gini is 0, the curve is the equality line and k is arbitrary (set to 0.5)\n")
    err.write("note: the estimate matches the bottom/top share ratio, not each share separately\n")
    _render(sections, args.format, _param_precision(args.precision), out)
    return EXIT_OK


def _fit_all(args, err, model):
    runs = []
    for rec in _load_records(args):
        if rec.decile_shares is None:
            err.write(f"warning: skipping {rec.country} {rec.year}: no decile shares\n")
            continue
        runs.append(run_fit(rec, model, args.objective))
    return runs


def cmd_fit(args, out, err) -> int:
    runs = _fit_all(args, err, args.model)
    cols = {}
    for r in runs:
        cols[f"{r.record.country}:actual"] = r.record.decile_shares
        cols[f"{r.record.country}:estimate"] = r.shares
    sections = [
        _Section("parameters", fit_rows(runs)),
        _Section("deciles", decile_rows(cols) if runs else []),
        _Section("fit", gof_rows({r.record.country: r.gof for r in runs})),
    ]
    _render(sections, args.format, _param_precision(args.precision), out)
    return EXIT_OK


def cmd_compare(args, out, err) -> int:
    weighted = _fit_all(args, err, "weighted")
    kakwani = [run_fit(w.record, "kakwani", args.objective) for w in weighted]
    cols = {}
    for w, k in zip(weighted, kakwani):
        c = w.record.country
        cols[f"{c}:actual"] = w.record.decile_shares
        cols[f"{c}:weighted"] = w.shares
        cols[f"{c}:kakwani"] = k.shares
    sections = [
        _Section("parameters", fit_rows(weighted) + fit_rows(kakwani)),
        _Section("deciles", decile_rows(cols) if weighted else []),
        _Section("fit", gof_rows({
            f"{w.record.country}:{m.model}": m.gof for w, k in zip(weighted, kakwani) for m in (w, k)
        })),
        _Section("gini", gini_rows(weighted, kakwani)),
    ]
    _render(sections, args.format, _param_precision(args.precision), out)
    return EXIT_OK


def cmd_curve(args, out, err) -> int:
    if args.samples < 2:
        raise ValidationError("--samples must be >= 2")
    if args.model == "weighted" and args.gini is not None:
        obs = TailShareObservation(args.m, args.bottom, args.top, args.ratio)
        curve = estimate_simple(args.gini, obs, clamp=args.clamp).params
    else:
        curve = _curve_from_args(args)
    x = np.linspace(0.0, 1.0, args.samples)
    y = np.asarray(curve(x))
    rows = []
    for xi, yi in zip(x, y):
        row = {"x": float(xi), "y": float(yi)}
        if args.with_diagonal:
            row["diagonal"] = float(xi)
        rows.append(row)
    _render([_Section("curve", rows)], args.format, _param_precision(args.precision), out)
    return EXIT_OK


def cmd_gini(args, out, err) -> int:
    curve = _curve_from_args(args)
    try:
        value = gini(curve, args.method)
    except DomainError as exc:
        raise ValidationError(str(exc)) from None
    if args.format == "table":
        out.write(f"{value.value:.6f}\n")
    else:
        _render([_Section("gini", [{"gini": value.value, "method": value.method}])],
                args.format, 6, out)
    return EXIT_OK


def cmd_report(args, out, err) -> int:
    if not args.paper and not args.input:
        raise ValidationError("report needs --paper or --input")
    records = builtin_dataset() if args.paper else _load_records(args)
    rep = comparison_report(records)
    sections = [_Section(name, rows) for name, rows in rep["tables"].items()]
    _render(sections, args.format, _param_precision(args.precision), out)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("table", "csv", "json-lines"), default="table")
    p.add_argument("--precision", type=int, default=None,
                   help="decimals for model parameters (default 2, or $LORENZ_PRECISION)")


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="grouped-data CSV file ('-' for stdin)")
    src.add_argument("--builtin", action="store_true", help="use the built-in four-country data")
    p.add_argument("--objective", choices=("cumulative", "shares"), default="cumulative")


def _add_tail(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--gini", type=float, required=required)
    p.add_argument("--m", type=float, default=0.1, help="tail fraction (default 0.10)")
    p.add_argument("--bottom", type=float, required=required)
    p.add_argument("--top", type=float, required=required)
    p.add_argument("--ratio", type=float, default=None,
                   help="published bottom/top ratio, used instead of bottom/top")
    p.add_argument("--clamp", action="store_true", help="clamp an out-of-range k into [0, 1]")


def _add_model(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=("weighted", "kakwani"), default="weighted")
    p.add_argument("--p", type=float)
    p.add_argument("--k", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lorenzkit",
        description="Estimate Lorenz curves from the Gini index and income shares.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simple", help="closed-form estimate from Gini and one tail pair")
    _add_tail(p, required=True)
    p.add_argument("--actual", help="CSV with actual decile shares for goodness of fit")
    _add_common(p)
    p.set_defaults(func=cmd_simple)

    p = sub.add_parser("fit", help="least-squares fit to decile data")
    _add_source(p)
    p.add_argument("--model", choices=("weighted", "kakwani"), default="weighted")
    _add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("compare", help="weighted vs. Kakwani fits side by side")
    _add_source(p)
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("curve", help="emit plot-ready (x, y) points of a curve")
    _add_model(p)
    _add_tail(p, required=False)
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--with-diagonal", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("gini", help="Gini index of a parametric curve")
    _add_model(p)
    p.add_argument("--method", choices=("closed", "quadrature", "beta", "trapezoid"), default=None)
    _add_common(p)
    p.set_defaults(func=cmd_gini)

    p = sub.add_parser("report", help="run the full four-country comparison")
    p.add_argument("--paper", action="store_true", help="use the built-in reference data")
    p.add_argument("--input", help="grouped-data CSV instead of the built-in data")
    p.add_argument("--builtin", action="store_true", help=argparse.SUPPRESS)
    _add_common(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None, out: IO[str] | None = None,
         err: IO[str] | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out, err)
    except KOutOfRangeError as exc:
        err.write(f"error: {exc} (use --clamp to force it into range)\n")
        return EXIT_INFEASIBLE
    except EstimationInfeasibleError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INFEASIBLE
    except NonConvergenceError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_NONCONVERGENCE
    except (ValidationError, DomainError, LookupError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
