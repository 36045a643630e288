"""Community cost table: loading, validation and the embedded 23-row sample.

The text format is comma-separated with a mandatory header row. Empty cells
mean "not observed" and are kept as ``None`` rather than zero, so downstream
fits can tell the two apart.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import IO, Iterable

import numpy as np

from .errors import ParseError, SchemaError, TableValidationError

COLUMNS = (
    "name",
    "distance_km",
    "drive_time_min",
    "income_2011",
    "income_2016",
    "shelter_2011",
    "shelter_2016",
    "drive_2011",
    "drive_2016",
    "total_2011",
    "total_2016",
    "pct_2011",
    "pct_2016",
    "lone_drivers_2016",
)
MANDATORY = COLUMNS[:7]
OPTIONAL = COLUMNS[7:]

DEFAULT_DOMAIN_MAX_KM = 156.0

# tolerances absorbing the two-decimal rounding of the source table
TOTAL_TOL = 0.01
PCT_TOL = 0.05


@dataclass(frozen=True)
class CommunityRecord:
    name: str
    distance_km: float
    drive_time_min: float
    income_2011: float
    income_2016: float
    shelter_2011: float
    shelter_2016: float
    drive_2011: float | None = None
    drive_2016: float | None = None
    total_2011: float | None = None
    total_2016: float | None = None
    pct_2011: float | None = None
    pct_2016: float | None = None
    lone_drivers_2016: int | None = None

    def get(self, column: str):
        return getattr(self, column)


@dataclass(frozen=True)
class CommunityTable:
    records: tuple[CommunityRecord, ...]
    domain_max_km: float = DEFAULT_DOMAIN_MAX_KM

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def names(self) -> list[str]:
        return [r.name for r in self.records]

    def record(self, name: str) -> CommunityRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def column(self, name: str, *, allow_missing: bool = False) -> np.ndarray:
        """Return a column as a float array.

        Missing cells raise ``SchemaError`` unless ``allow_missing`` is set,
        in which case they become ``nan``.
        """
        if name not in COLUMNS or name == "name":
            raise SchemaError(f"unknown numeric column {name!r}")
        vals = [r.get(name) for r in self.records]
        if not allow_missing and any(v is None for v in vals):
            missing = [r.name for r, v in zip(self.records, vals) if v is None]
            raise SchemaError(f"column {name!r} missing for {', '.join(missing)}")
        return np.array([np.nan if v is None else float(v) for v in vals])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for r in self.records:
            writer.writerow([_format_cell(r.get(c)) for c in COLUMNS])
        return buf.getvalue()


@dataclass(frozen=True)
class Finding:
    record: str
    field: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Finding, ...] = ()
    warnings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_text(self) -> str:
        lines = [f"ERROR {f.record}: {f.field}: {f.message}" for f in self.errors]
        lines += [f"WARNING {f.record}: {f.field}: {f.message}" for f in self.warnings]
        lines.append(f"{len(self.errors)} error(s), {len(self.warnings)} warning(s)")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        as_list = lambda fs: [{"record": f.record, "field": f.field, "message": f.message} for f in fs]
        return {"ok": self.ok, "errors": as_list(self.errors), "warnings": as_list(self.warnings)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def _parse_number(text: str, row: int, column: str, integer: bool = False):
    text = text.strip()
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise ParseError(row, column, text) from None
    if not math.isfinite(value):
        raise ParseError(row, column, text)
    if integer:
        if not value.is_integer():
            raise ParseError(row, column, text)
        return int(value)
    return value


def load_table(
    source: IO[str] | Iterable[str],
    *,
    domain_max_km: float = DEFAULT_DOMAIN_MAX_KM,
    strict: bool = True,
) -> CommunityTable:
    """Parse a comma-separated community table.

    Parameters
    ----------
    source : text stream or iterable of lines
        Must start with a header row; unknown columns are ignored.
    domain_max_km : float
        Dataset cut-off distance.
    strict : bool
        When true (default) the table is validated and ``TableValidationError``
        is raised on any hard violation. Pass ``False`` to get the raw table
        and call :func:`validate_table` yourself.
    """
    reader = csv.reader(source)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise SchemaError("empty input: no header row") from None
    missing = [c for c in MANDATORY if c not in header]
    if missing:
        raise SchemaError(f"missing mandatory column(s): {', '.join(missing)}")
    index = {c: header.index(c) for c in COLUMNS if c in header}

    records = []
    for rownum, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < len(header):
            row = row + [""] * (len(header) - len(row))
        values = {}
        for col, i in index.items():
            cell = row[i]
            if col == "name":
                values[col] = cell.strip()
            else:
                values[col] = _parse_number(cell, rownum, col, integer=(col == "lone_drivers_2016"))
        for col in MANDATORY[1:]:
            if values[col] is None:
                raise ParseError(rownum, col, "")
        if not values["name"]:
            raise ParseError(rownum, "name", "")
        records.append(CommunityRecord(**values))
    if not records:
        raise SchemaError("no records")

    table = CommunityTable(tuple(records), float(domain_max_km))
    if strict:
        report = validate_table(table)
        if not report.ok:
            raise TableValidationError(report)
    return table


def load_csv(path, **kwargs) -> CommunityTable:
    with open(path, newline="", encoding="utf-8") as fh:
        return load_table(fh, **kwargs)


def validate_table(table: CommunityTable) -> ValidationReport:
    """Check every record and table-level invariant.

    Sign and range violations are errors; disagreement between the derived
    columns (total, pct) and their inputs is reported as a warning.
    """
    errors: list[Finding] = []
    warnings: list[Finding] = []

    seen = set()
    for r in table.records:
        if r.name in seen:
            errors.append(Finding(r.name, "name", "duplicate name"))
        seen.add(r.name)

        if not r.distance_km > 0:
            errors.append(Finding(r.name, "distance_km", f"must be > 0, got {r.distance_km:g}"))
        if r.drive_time_min < 0:
            errors.append(Finding(r.name, "drive_time_min", f"must be >= 0, got {r.drive_time_min:g}"))
        for col in ("income_2011", "income_2016", "shelter_2011", "shelter_2016"):
            v = r.get(col)
            if not v > 0:
                errors.append(Finding(r.name, col, f"must be > 0, got {v:g}"))
        for col in ("drive_2011", "drive_2016", "total_2011", "total_2016"):
            v = r.get(col)
            if v is not None and v < 0:
                errors.append(Finding(r.name, col, f"must be >= 0, got {v:g}"))
        for col in ("pct_2011", "pct_2016"):
            v = r.get(col)
            if v is not None and not 0 < v < 100:
                errors.append(Finding(r.name, col, f"must lie in (0, 100), got {v:g}"))
        if r.lone_drivers_2016 is not None and r.lone_drivers_2016 < 0:
            errors.append(Finding(r.name, "lone_drivers_2016", "must be >= 0"))

        for year in (2011, 2016):
            shelter, drive = r.get(f"shelter_{year}"), r.get(f"drive_{year}")
            total, pct = r.get(f"total_{year}"), r.get(f"pct_{year}")
            income = r.get(f"income_{year}")
            if total is not None and drive is not None:
                gap = total - (shelter + drive)
                if abs(gap) > TOTAL_TOL + 1e-9:
                    warnings.append(Finding(
                        r.name, f"total_{year}",
                        f"differs from shelter + drive by {gap:+.2f}"))
            if pct is not None and total is not None and income and income > 0:
                implied = 100.0 * 12.0 * total / income
                if abs(pct - implied) > PCT_TOL + 1e-9:
                    warnings.append(Finding(
                        r.name, f"pct_{year}",
                        f"{pct:g} disagrees with implied {implied:.2f}"))

    if table.records:
        dmax = max(r.distance_km for r in table.records)
        if table.domain_max_km < dmax:
            errors.append(Finding(
                "<table>", "domain_max_km",
                f"{table.domain_max_km:g} is below the largest distance {dmax:g}"))
    else:
        errors.append(Finding("<table>", "records", "no records"))
    return ValidationReport(tuple(errors), tuple(warnings))


def builtin_table() -> CommunityTable:
    """The 23 Ontario CMA/CA communities with 2011 and 2016 census costs.

    Toronto's own distance is recorded as 10 km because a routing service
    cannot measure a place to itself; that convention lives in the data.
    """
    text = resources.files(__package__).joinpath("data/communities.csv").read_text(encoding="utf-8")
    return load_table(io.StringIO(text), domain_max_km=DEFAULT_DOMAIN_MAX_KM)


__all__ = [
    "COLUMNS",
    "CommunityRecord",
    "CommunityTable",
    "Finding",
    "ValidationReport",
    "builtin_table",
    "load_csv",
    "load_table",
    "validate_table",
]
