"""Grouped income-distribution records: CSV ingestion, the built-in
four-country dataset, and CSV report writing.

CSV schema (comma-separated, ``.`` decimal point, ``#`` starts a comment
line)::

    country,year,gini[,d1,...,d10][,bottom5,top5][,bottom10,top10][,ratio5,ratio10]

Decile columns must be all present or all absent. ``ratioN`` columns hold
a published bottom/top ratio and are optional.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, ValidationError
from .simple import TailShareObservation

__all__ = [
    "GroupedDistribution",
    "parse_grouped_csv",
    "builtin_dataset",
    "write_report_csv",
    "write_grouped_csv",
    "format_number",
]

log = logging.getLogger(__name__)

DECILE_COLUMNS = tuple(f"d{i}" for i in range(1, 11))
TAIL_COLUMNS = {5: ("bottom5", "top5", "ratio5"), 10: ("bottom10", "top10", "ratio10")}
REQUIRED_COLUMNS = ("country", "year", "gini")

SHARE_SUM_TOL = 1e-3
SHARE_SUM_HARD = 1e-2
ORDER_SLACK = 1e-6
TAIL_DECILE_TOL = 1e-3


@dataclass(frozen=True)
class GroupedDistribution:
    """One country-year: Gini index, optional decile shares, tail observations."""

    country: str
    year: int
    gini: float
    decile_shares: tuple[float, ...] | None = None
    tail_observations: tuple[TailShareObservation, ...] = ()
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tail_observations", tuple(sorted(self.tail_observations, key=lambda o: o.m)))
        problems = _check(self)
        if problems:
            raise ValidationError(f"{self.country} {self.year}: " + "; ".join(problems))

    def tail(self, m: float) -> TailShareObservation | None:
        for obs in self.tail_observations:
            if math.isclose(obs.m, m):
                return obs
        return None

    def decile_tail(self) -> TailShareObservation:
        """Bottom/top 10% shares read from the first and last decile."""
        if self.decile_shares is None:
            raise ValidationError(f"{self.country} {self.year} has no decile shares")
        return TailShareObservation(0.1, self.decile_shares[0], self.decile_shares[-1])


def _check(rec: GroupedDistribution) -> list[str]:
    problems = []
    if not 0.0 <= rec.gini < 1.0:
        problems.append(f"gini {rec.gini} outside [0, 1)")
    s = rec.decile_shares
    if s is not None:
        if len(s) != 10:
            problems.append(f"expected 10 decile shares, got {len(s)}")
            return problems
        if any(not (v >= 0.0) for v in s):
            problems.append("decile shares must be non-negative")
        total = math.fsum(s)
        if abs(total - 1.0) > SHARE_SUM_HARD:
            problems.append(f"decile shares sum to {total:.6g}, not 1")
        diffs = np.diff(s)
        if np.any(diffs < -ORDER_SLACK):
            i = int(np.flatnonzero(diffs < -ORDER_SLACK)[0])
            problems.append(f"decile shares decrease from d{i + 1} to d{i + 2}")
        tail10 = rec.tail(0.1)
        if tail10 is not None:
            if abs(tail10.bottom_share - s[0]) > TAIL_DECILE_TOL:
                problems.append(f"bottom10 {tail10.bottom_share} disagrees with d1 {s[0]}")
            if abs(tail10.top_share - s[-1]) > TAIL_DECILE_TOL:
                problems.append(f"top10 {tail10.top_share} disagrees with d10 {s[-1]}")
    return problems


def _share_warnings(country, year, shares) -> tuple[str, ...]:
    if shares is None:
        return ()
    total = math.fsum(shares)
    if abs(total - 1.0) > SHARE_SUM_TOL:
        msg = f"{country} {year}: decile shares sum to {total:.4f}"
        log.warning(msg)
        return (msg,)
    return ()


def _num(row: Mapping[str, str], col: str, line: int) -> float | None:
    raw = (row.get(col) or "").strip()
    if raw == "":
        return None
    try:
        v = float(raw)
    except ValueError:
        raise ValidationError(f"row {line}, column {col!r}: not a number: {raw!r}") from None
    if not math.isfinite(v):
        raise ValidationError(f"row {line}, column {col!r}: not finite")
    return v


def _record_from_row(row: Mapping[str, str], line: int) -> GroupedDistribution:
    country = (row.get("country") or "").strip()
    if not country:
        raise ValidationError(f"row {line}, column 'country': empty")
    year_raw = (row.get("year") or "").strip()
    try:
        year = int(year_raw)
    except ValueError:
        raise ValidationError(f"row {line}, column 'year': not an integer: {year_raw!r}") from None
    gini = _num(row, "gini", line)
    if gini is None:
        raise ValidationError(f"row {line}, column 'gini': missing")

    deciles = [_num(row, c, line) for c in DECILE_COLUMNS]
    present = [v is not None for v in deciles]
    if any(present) and not all(present):
        missing = [c for c, p in zip(DECILE_COLUMNS, present) if not p]
        raise ValidationError(f"row {line}, column {missing[0]!r}: decile columns incomplete")
    shares = tuple(deciles) if all(present) else None

    tails = []
    for m_pct, (bcol, tcol, rcol) in TAIL_COLUMNS.items():
        b, t, r = _num(row, bcol, line), _num(row, tcol, line), _num(row, rcol, line)
        if b is None and t is None:
            continue
        if b is None or t is None:
            col = bcol if b is None else tcol
            raise ValidationError(f"row {line}, column {col!r}: tail pair incomplete")
        try:
            tails.append(TailShareObservation(m_pct / 100.0, b, t, r))
        except DomainError as exc:
            raise ValidationError(f"row {line}, column {bcol!r}: {exc}") from None
    try:
        return GroupedDistribution(
            country, year, gini, shares, tuple(tails),
            warnings=_share_warnings(country, year, shares),
        )
    except ValidationError as exc:
        raise ValidationError(f"row {line}: {exc}") from None


def parse_grouped_csv(stream: IO[str] | Iterable[str]) -> list[GroupedDistribution]:
    """Parse grouped-distribution records from a CSV text stream.

    Raises
    ------
    ValidationError
        On a malformed value (message names row and column) or a record
        that breaks an invariant (message lists the failed checks).
    """
    lines = (ln for ln in stream if ln.strip() and not ln.lstrip().startswith("#"))
    reader = csv.DictReader(lines)
    if reader.fieldnames is None:
        return []
    header = [h.strip().lower() for h in reader.fieldnames]
    reader.fieldnames = header
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise ValidationError(f"header is missing column(s): {', '.join(missing)}")
    return [_record_from_row(row, i) for i, row in enumerate(reader, start=1)]


# Published values: Gini, actual decile shares, tail
# shares and their published ratios for four country-years. Stored verbatim.
_REFERENCE_ROWS = (
    ("Malta", 2018, 0.287,
     (0.0360, 0.0510, 0.0620, 0.0720, 0.0830, 0.0940, 0.1070, 0.1210, 0.1440, 0.2300),
     (0.036, 0.230, 0.157), (0.016, 0.139, 0.115)),
    ("Taiwan", 2016, 0.315,
     (0.0336, 0.0491, 0.0590, 0.0684, 0.0779, 0.0890, 0.1022, 0.1199, 0.1493, 0.2517),
     (0.034, 0.252, 0.133), (0.014, 0.156, 0.088)),
    ("USA", 2016, 0.411,
     (0.0179, 0.0344, 0.0457, 0.0572, 0.0693, 0.0832, 0.1005, 0.1245, 0.1625, 0.3046),
     (0.018, 0.305, 0.059), (0.006, 0.196, 0.029)),
    ("Côte d'Ivoire", 2015, 0.590,
     (0.0074, 0.0178, 0.0263, 0.0353, 0.0459, 0.0583, 0.0759, 0.1026, 0.1535, 0.4769),
     (0.007, 0.477, 0.016), (0.002, 0.350, 0.006)),
)


def builtin_dataset() -> list[GroupedDistribution]:
    """The four reference country-years (Malta, Taiwan, USA, Côte d'Ivoire)."""
    out = []
    for country, year, gini, deciles, t10, t5 in _REFERENCE_ROWS:
        tails = (TailShareObservation(0.10, *t10), TailShareObservation(0.05, *t5))
        out.append(GroupedDistribution(country, year, gini, deciles, tails))
    return out


def format_number(value, digits: int | None = None) -> str:
    """Fixed ``digits`` decimals, or up to 6 significant digits when None."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            return str(float(value))
        if digits is not None:
            return f"{float(value):.{digits}f}"
        return f"{float(value):.6g}"
    return str(value)


def write_report_csv(
    rows: Sequence[Mapping[str, object]],
    output: IO[str],
    columns: Sequence[str] | None = None,
    precision: Mapping[str, int] | None = None,
) -> None:
    """Write ``rows`` as RFC 4180 CSV.

    ``columns`` fixes the header order (default: keys of the first row).
    ``precision`` maps column names to a fixed number of decimals; other
    numbers get up to 6 significant digits.
    """
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    precision = precision or {}
    writer = csv.writer(output, lineterminator="\r\n")
    try:
        writer.writerow(columns)
        for i, row in enumerate(rows):
            if set(row) - set(columns):
                raise ValidationError(f"report row {i} has columns not in the header")
            writer.writerow([format_number(row.get(c), precision.get(c)) for c in columns])
    except OSError as exc:
        raise OSError(f"failed writing report CSV: {exc}") from exc


def write_grouped_csv(records: Sequence[GroupedDistribution], output: IO[str]) -> None:
    """Write records in the schema read by :func:`parse_grouped_csv`.

    Values are written with ``repr`` precision, so parsing the output gives
    back equal records.
    """
    cols = ["country", "year", "gini", *DECILE_COLUMNS]
    for bcol, tcol, rcol in TAIL_COLUMNS.values():
        cols += [bcol, tcol, rcol]
    rows = []
    for rec in records:
        row = {"country": rec.country, "year": rec.year, "gini": repr(rec.gini)}
        if rec.decile_shares is not None:
            row.update({c: repr(float(v)) for c, v in zip(DECILE_COLUMNS, rec.decile_shares)})
        for m_pct, (bcol, tcol, rcol) in TAIL_COLUMNS.items():
            obs = rec.tail(m_pct / 100.0)
            if obs is not None:
                row[bcol], row[tcol] = repr(obs.bottom_share), repr(obs.top_share)
                if obs.published_ratio is not None:
                    row[rcol] = repr(obs.published_ratio)
        rows.append(row)
    writer = csv.DictWriter(output, cols, lineterminator="\r\n")
    writer.writeheader()
    writer.writerows(rows)
