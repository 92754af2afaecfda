"""Panel-spec parsing, CSV ingestion and cross-validation.

The panel spec travels as JSON with a fixed schema; data arrives as RFC-4180
CSV with a header row. Every function reports problems through a
ValidationReport instead of failing on the first issue.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Mapping, Optional

from . import regions
from .model import (
    GLYPH_KINDS,
    PanelSpec,
    GlyphColumnSpec,
    RegionId,
    RegionTable,
    SHADING_MODES,
    SORT_DIRECTIONS,
    SortSpec,
    TimeSeriesCube,
    all_region_ids,
    check_glyph_fields,
)
from .regions import UnknownRegionError

APP_PROFILE_COLUMN_LIMIT = 3

# Layout constants needed for the library-profile width check; kept in sync
# with layout.py through a unit test.
_MAP_COL_IN = 1.5
_ID_COL_IN = 0.9
_MIN_GLYPH_COL_IN = 1.2


@dataclass(frozen=True)
class Issue:
    code: str
    message: str
    location: str = ""

    def to_json(self) -> str:
        return json.dumps(
            {"code": self.code, "message": self.message, "location": self.location},
            sort_keys=True,
        )


@dataclass
class ValidationReport:
    errors: list[Issue] = field(default_factory=list)
    warnings: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error(self, code: str, message: str, location: str = "") -> None:
        self.errors.append(Issue(code, message, location))

    def warn(self, code: str, message: str, location: str = "") -> None:
        self.warnings.append(Issue(code, message, location))

    def extend(self, other: "ValidationReport") -> None:
        self.errors.extend(other.errors)
        self.warnings.extend(other.warnings)

    def json_lines(self, include_warnings: bool = True) -> str:
        issues = list(self.errors) + (list(self.warnings) if include_warnings else [])
        return "\n".join(issue.to_json() for issue in issues)

    def to_dict(self) -> dict:
        return {
            "errors": [vars(i) for i in self.errors],
            "warnings": [vars(i) for i in self.warnings],
        }


class SpecValidationError(Exception):
    """Raised by render entry points when a report contains errors."""

    def __init__(self, report: ValidationReport):
        lines = "; ".join(i.message for i in report.errors[:3])
        super().__init__(f"{len(report.errors)} validation error(s): {lines}")
        self.report = report


def link_region(label: str) -> RegionId:
    """Map a USPS code, state name or 2-digit FIPS code to its RegionId."""
    return RegionId(regions.resolve_label(label))


_SPEC_KEYS = {"dataset", "title1", "title2", "shading", "color_safe", "sort", "columns"}
_SORT_KEYS = {"column", "direction"}
_COLUMN_KEYS = {
    "kind", "lab1", "lab2", "lab3", "lab4",
    "col1", "col2", "refval", "panel_data", "box_columns",
}


def _expect_str(raw: dict, key: str, default: str, where: str,
                report: ValidationReport) -> str:
    value = raw.get(key, default)
    if not isinstance(value, str):
        report.error("BAD_TYPE", f"{key} must be a string", where)
        return default
    return value


def parse_panel_spec(text: str) -> tuple[Optional[PanelSpec], ValidationReport]:
    """Parse the JSON panel-spec document.

    Returns (spec, report); spec is None whenever the report has errors.
    Unknown keys are errors, defaults are shading=map, direction=ascending,
    color_safe=false.
    """
    report = ValidationReport()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        report.error("MALFORMED_DOCUMENT", f"not valid JSON: {exc}", "document")
        return None, report
    if not isinstance(raw, dict):
        report.error("MALFORMED_DOCUMENT", "top level must be an object", "document")
        return None, report

    for key in sorted(set(raw) - _SPEC_KEYS):
        report.error("UNKNOWN_KEY", f"unknown key {key!r}", key)

    dataset = _expect_str(raw, "dataset", "", "dataset", report)
    title1 = _expect_str(raw, "title1", "", "title1", report)
    title2 = _expect_str(raw, "title2", "", "title2", report)
    shading = _expect_str(raw, "shading", "map", "shading", report)
    if shading not in SHADING_MODES:
        report.error("UNKNOWN_SHADING", f"shading must be one of {SHADING_MODES}",
                     "shading")
    color_safe = raw.get("color_safe", False)
    if not isinstance(color_safe, bool):
        report.error("BAD_TYPE", "color_safe must be a boolean", "color_safe")
        color_safe = False

    sort_spec: Optional[SortSpec] = None
    raw_sort = raw.get("sort")
    if not isinstance(raw_sort, dict):
        report.error("MISSING_SORT", "sort object with a column is required", "sort")
    else:
        for key in sorted(set(raw_sort) - _SORT_KEYS):
            report.error("UNKNOWN_KEY", f"unknown key {key!r} in sort", "sort")
        column = raw_sort.get("column")
        direction = raw_sort.get("direction", "ascending")
        if not isinstance(column, str) or not column:
            report.error("MISSING_SORT", "sort.column must be a nonempty string",
                         "sort.column")
        elif direction not in SORT_DIRECTIONS:
            report.error("BAD_DIRECTION",
                         f"sort.direction must be one of {SORT_DIRECTIONS}",
                         "sort.direction")
        else:
            sort_spec = SortSpec(column=column, direction=direction)

    columns: list[GlyphColumnSpec] = []
    raw_columns = raw.get("columns", [])
    if not isinstance(raw_columns, list):
        report.error("BAD_TYPE", "columns must be an array", "columns")
        raw_columns = []
    for index, raw_col in enumerate(raw_columns):
        where = f"columns[{index}]"
        if not isinstance(raw_col, dict):
            report.error("BAD_TYPE", "column spec must be an object", where)
            continue
        for key in sorted(set(raw_col) - _COLUMN_KEYS):
            report.error("UNKNOWN_KEY", f"unknown key {key!r}", where)
        kind = raw_col.get("kind")
        if not isinstance(kind, str) or kind not in GLYPH_KINDS:
            report.error("UNKNOWN_GLYPH_KIND",
                         f"kind must be one of {GLYPH_KINDS}", where)
            continue
        refval = raw_col.get("refval")
        if refval is not None and not isinstance(refval, (int, float)):
            report.error("BAD_TYPE", "refval must be a number", where)
            continue
        box_columns = raw_col.get("box_columns")
        if box_columns is not None:
            if (not isinstance(box_columns, list)
                    or any(not isinstance(c, str) for c in box_columns)):
                report.error("BAD_TYPE", "box_columns must be an array of strings",
                             where)
                continue
            box_columns = tuple(box_columns)
        fields = dict(
            col1=raw_col.get("col1"),
            col2=raw_col.get("col2"),
            refval=None if refval is None else float(refval),
            panel_data=raw_col.get("panel_data"),
            box_columns=box_columns,
            lab4=raw_col.get("lab4"),
        )
        problems = check_glyph_fields(kind, **fields)
        if problems:
            for problem in problems:
                report.error("BAD_GLYPH_FIELDS", problem, where)
            continue
        columns.append(GlyphColumnSpec(
            kind=kind,
            lab1=_expect_str(raw_col, "lab1", "", where, report),
            lab2=_expect_str(raw_col, "lab2", "", where, report),
            lab3=_expect_str(raw_col, "lab3", "", where, report),
            **fields,
        ))

    if not report.ok or sort_spec is None:
        return None, report
    spec = PanelSpec(
        dataset=dataset,
        title1=title1,
        title2=title2,
        shading=shading,
        sort=sort_spec,
        columns=tuple(columns),
        color_safe=color_safe,
    )
    return spec, report


def serialize_panel_spec(spec: PanelSpec) -> str:
    """Inverse of parse_panel_spec; parse(serialize(spec)) == spec."""
    doc: dict = {
        "dataset": spec.dataset,
        "title1": spec.title1,
        "title2": spec.title2,
        "shading": spec.shading,
        "color_safe": spec.color_safe,
        "sort": {"column": spec.sort.column, "direction": spec.sort.direction},
        "columns": [],
    }
    for col in spec.columns:
        raw: dict = {"kind": col.kind, "lab1": col.lab1, "lab2": col.lab2,
                     "lab3": col.lab3}
        if col.lab4 is not None:
            raw["lab4"] = col.lab4
        if col.col1 is not None:
            raw["col1"] = col.col1
        if col.col2 is not None:
            raw["col2"] = col.col2
        if col.refval is not None:
            raw["refval"] = col.refval
        if col.panel_data is not None:
            raw["panel_data"] = col.panel_data
        if col.box_columns is not None:
            raw["box_columns"] = list(col.box_columns)
        doc["columns"].append(raw)
    return json.dumps(doc, indent=2)


_REGION_COLUMN_NAMES = ("state", "region", "id")


def _read_csv_rows(
    text: str, report: ValidationReport
) -> tuple[Optional[list[str]], list[dict]]:
    # Leading '#' lines carry provenance notes (e.g. synthetic-data markers).
    lines = text.splitlines()
    start = 0
    while start < len(lines) and lines[start].startswith("#"):
        start += 1
    body = "\n".join(lines[start:])
    if not body.strip():
        report.error("UNPARSABLE_HEADER", "csv has no header row", "header")
        return None, []
    reader = csv.DictReader(io.StringIO(body))
    header = reader.fieldnames
    if not header or any(name is None or name.strip() == "" for name in header):
        report.error("UNPARSABLE_HEADER", "csv header row is malformed", "header")
        return None, []
    if len(set(header)) != len(header):
        report.error("UNPARSABLE_HEADER", "duplicate column names in header",
                     "header")
        return None, []
    return list(header), list(reader)


def _detect_region_column(header: list[str], region_column: Optional[str],
                          report: ValidationReport) -> Optional[str]:
    if region_column is not None:
        if region_column not in header:
            report.error("UNKNOWN_COLUMN",
                         f"region column {region_column!r} not in header",
                         "header")
            return None
        return region_column
    for name in header:
        if name.lower() in _REGION_COLUMN_NAMES:
            return name
    report.error("UNPARSABLE_HEADER",
                 "no region column found (expected one of state/region/id)",
                 "header")
    return None


def ingest_region_table(
    text: str,
    region_column: Optional[str] = None,
    source_name: str = "",
) -> tuple[Optional[RegionTable], ValidationReport]:
    """Parse a one-row-per-region CSV into a RegionTable.

    All 51 regions must appear exactly once. Numeric cells are parsed as
    floats; blank cells are missing; other unparsable cells become missing
    with a warning.
    """
    report = ValidationReport()
    header, records = _read_csv_rows(text, report)
    if header is None:
        return None, report
    if not records:
        report.error("MISSING_REGION", "csv has no data rows", "document")
        return None, report
    key_column = _detect_region_column(header, region_column, report)
    if key_column is None:
        return None, report

    value_columns = [name for name in header if name != key_column]
    rows: dict[RegionId, dict[str, Optional[float]]] = {}
    for line_no, record in enumerate(records, start=2):
        label = (record.get(key_column) or "").strip()
        try:
            region = link_region(label)
        except UnknownRegionError:
            report.error("UNKNOWN_REGION", f"unknown region label {label!r}",
                         f"row {line_no}")
            continue
        if region in rows:
            report.error("DUPLICATE_REGION", f"region {region} appears twice",
                         f"row {line_no}")
            continue
        row: dict[str, Optional[float]] = {}
        for column in value_columns:
            cell = (record.get(column) or "").strip()
            if cell == "":
                row[column] = None
                continue
            try:
                value = float(cell)
            except ValueError:
                report.warn("NOT_NUMERIC",
                            f"cell {cell!r} is not numeric; treated as missing",
                            f"{region}/{column}")
                row[column] = None
                continue
            if value != value or value in (float("inf"), float("-inf")):
                report.warn("NOT_NUMERIC",
                            f"cell {cell!r} is not finite; treated as missing",
                            f"{region}/{column}")
                row[column] = None
            else:
                row[column] = value
        rows[region] = row

    missing = sorted(set(all_region_ids()) - set(rows))
    if missing:
        report.error("MISSING_REGION",
                     "missing regions: " + ", ".join(missing),
                     "document")
    if not report.ok:
        return None, report
    table = RegionTable(rows=rows, column_names=tuple(value_columns),
                        source_name=source_name)
    return table, report


def ingest_time_series(
    text: str,
    name: str = "",
) -> tuple[Optional[TimeSeriesCube], ValidationReport]:
    """Parse a long-format CSV (region, x, y) into a TimeSeriesCube."""
    report = ValidationReport()
    header, records = _read_csv_rows(text, report)
    if header is None:
        return None, report
    lowered = {name.lower(): name for name in header}
    region_col = next(
        (lowered[n] for n in _REGION_COLUMN_NAMES if n in lowered), None
    )
    x_col = lowered.get("x")
    y_col = lowered.get("y")
    if region_col is None or x_col is None or y_col is None:
        report.error("UNPARSABLE_HEADER",
                     "time series csv needs region, x and y columns", "header")
        return None, report

    points: dict[RegionId, list[tuple[float, float]]] = {}
    for line_no, record in enumerate(records, start=2):
        label = (record.get(region_col) or "").strip()
        try:
            region = link_region(label)
        except UnknownRegionError:
            report.error("UNKNOWN_REGION", f"unknown region label {label!r}",
                         f"row {line_no}")
            continue
        try:
            x = float((record.get(x_col) or "").strip())
            y = float((record.get(y_col) or "").strip())
        except ValueError:
            report.error("NOT_NUMERIC", "x and y must be numeric", f"row {line_no}")
            continue
        points.setdefault(region, []).append((x, y))

    missing = sorted(set(all_region_ids()) - set(points))
    if missing:
        report.error("MISSING_REGION",
                     "missing regions: " + ", ".join(missing), "document")
    if not report.ok:
        return None, report

    counts = {len(series) for series in points.values()}
    if len(counts) != 1:
        report.error("RAGGED_SERIES",
                     f"regions have differing point counts: {sorted(counts)}",
                     "document")
        return None, report
    if next(iter(counts)) < 2:
        report.error("RAGGED_SERIES", "time series need at least 2 points",
                     "document")
        return None, report

    rows: dict[RegionId, tuple[tuple[float, float], ...]] = {}
    for region, series in points.items():
        series.sort(key=lambda p: p[0])
        xs = [x for x, _ in series]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            report.error("NON_MONOTONE_X",
                         f"x values not strictly increasing for {region}",
                         str(region))
            continue
        rows[region] = tuple(series)
    if not report.ok:
        return None, report
    return TimeSeriesCube(rows=rows, name=name), report


def _glyph_width_in(column_count: int, page_width_in: float) -> float:
    return (page_width_in - _MAP_COL_IN - _ID_COL_IN) / column_count


def validate(
    spec: PanelSpec,
    table: RegionTable,
    cubes: Optional[Mapping[str, TimeSeriesCube]] = None,
    profile: str = "app",
    page_width_in: float = 7.5,
) -> ValidationReport:
    """Cross-check a parsed spec against its data.

    Deterministic and side-effect free; an empty error list means the spec
    is renderable as-is.
    """
    if profile not in ("app", "library"):
        raise ValueError("profile must be 'app' or 'library'")
    cubes = cubes or {}
    report = ValidationReport()

    if not table.has_column(spec.sort.column):
        report.error("UNKNOWN_SORT_COLUMN",
                     f"sort column {spec.sort.column!r} not in dataset",
                     "sort.column")
    else:
        values = table.column_values(spec.sort.column)
        missing = sorted(r for r, v in values.items() if v is None)
        if missing:
            report.warn("MISSING_VALUE",
                        "missing sort values order last: " + ", ".join(missing),
                        "sort.column")

    if profile == "app" and len(spec.columns) > APP_PROFILE_COLUMN_LIMIT:
        report.error("COLUMN_LIMIT",
                     f"app profile allows at most {APP_PROFILE_COLUMN_LIMIT} "
                     f"glyph columns, got {len(spec.columns)}",
                     "columns")
    if profile == "library" and spec.columns:
        width = _glyph_width_in(len(spec.columns), page_width_in)
        if width < _MIN_GLYPH_COL_IN:
            report.error("WIDTH_EXCEEDED",
                         f"{len(spec.columns)} glyph columns leave {width:.2f} in "
                         f"each; minimum is {_MIN_GLYPH_COL_IN} in",
                         "columns")

    for index, column in enumerate(spec.columns):
        where = f"columns[{index}]"
        for name in column.referenced_columns():
            if not table.has_column(name):
                report.error("UNKNOWN_COLUMN",
                             f"column {name!r} not in dataset", where)
                continue
            values = table.column_values(name)
            missing = sorted(r for r, v in values.items() if v is None)
            if missing:
                report.warn("MISSING_VALUE",
                            f"{name!r} missing for: " + ", ".join(missing),
                            where)
        if column.panel_data is not None and column.panel_data not in cubes:
            report.error("UNKNOWN_CUBE",
                         f"time series array {column.panel_data!r} not provided",
                         where)
    return report
