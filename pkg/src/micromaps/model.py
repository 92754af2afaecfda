"""Domain types shared by the parser, layout, glyph, map and emitter modules.

Everything here is immutable after construction and safe to share across
concurrent renders.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from . import regions
from .regions import REGION_COUNT, UnknownRegionError


class RegionId(str):
    """2-letter USPS state code; construction fails outside the fixed 51."""

    __slots__ = ()

    def __new__(cls, code: str) -> "RegionId":
        if code not in regions.CODE_SET:
            raise UnknownRegionError(code)
        return super().__new__(cls, code)


def all_region_ids() -> tuple[RegionId, ...]:
    return tuple(RegionId(code) for code in regions.ALL_CODES)


GLYPH_KINDS: tuple[str, ...] = ("dot", "arrow", "ts", "scatdot", "boxplot")
SHADING_MODES: tuple[str, ...] = ("map", "maptail", "mapcum", "mapmedian")
SORT_DIRECTIONS: tuple[str, ...] = ("ascending", "descending")

# Color roles a primitive may carry; the emitter resolves them via Palette.
SLOT_ROLES: tuple[str, ...] = ("slot0", "slot1", "slot2", "slot3", "slot4")
ALL_ROLES: tuple[str, ...] = SLOT_ROLES + (
    "median",
    "tail",
    "base",
    "band_above",
    "band_below",
    "ref",
)


def check_glyph_fields(
    kind: str,
    *,
    col1: Optional[str],
    col2: Optional[str],
    refval: Optional[float],
    panel_data: Optional[str],
    box_columns: Optional[Sequence[str]],
    lab4: Optional[str],
) -> list[str]:
    """Return the field-combination problems for one glyph column.

    Used both by the parser (to report every problem with its column index)
    and by GlyphColumnSpec construction (which refuses invalid combinations).
    """
    problems: list[str] = []
    if kind not in GLYPH_KINDS:
        return [f"unknown glyph kind {kind!r}"]

    def forbid(value: object, name: str) -> None:
        if value is not None:
            problems.append(f"{name} not allowed for {kind}")

    def require(value: object, name: str) -> None:
        if value is None:
            problems.append(f"{name} required for {kind}")

    if kind == "dot":
        require(col1, "col1")
        forbid(col2, "col2")
        forbid(panel_data, "panel_data")
        forbid(box_columns, "box_columns")
        forbid(lab4, "lab4")
    elif kind == "arrow":
        require(col1, "col1")
        require(col2, "col2")
        forbid(panel_data, "panel_data")
        forbid(box_columns, "box_columns")
        forbid(lab4, "lab4")
    elif kind == "ts":
        require(panel_data, "panel_data")
        forbid(col1, "col1")
        forbid(col2, "col2")
        forbid(box_columns, "box_columns")
    elif kind == "scatdot":
        require(col1, "col1")
        require(col2, "col2")
        forbid(panel_data, "panel_data")
        forbid(box_columns, "box_columns")
    elif kind == "boxplot":
        require(box_columns, "box_columns")
        if box_columns is not None and len(box_columns) < 5:
            problems.append("box_columns needs at least 5 entries")
        forbid(col1, "col1")
        forbid(col2, "col2")
        forbid(panel_data, "panel_data")
        forbid(lab4, "lab4")
    if refval is not None and kind not in ("dot", "arrow", "boxplot"):
        problems.append(f"refval not allowed for {kind}")
    return problems


@dataclass(frozen=True)
class GlyphColumnSpec:
    """One "additional" column of the graphic: a statistical glyph per region."""

    kind: str
    lab1: str = ""
    lab2: str = ""
    lab3: str = ""
    lab4: Optional[str] = None
    col1: Optional[str] = None
    col2: Optional[str] = None
    refval: Optional[float] = None
    panel_data: Optional[str] = None
    box_columns: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        problems = check_glyph_fields(
            self.kind,
            col1=self.col1,
            col2=self.col2,
            refval=self.refval,
            panel_data=self.panel_data,
            box_columns=self.box_columns,
            lab4=self.lab4,
        )
        if problems:
            raise ValueError("; ".join(problems))

    def referenced_columns(self) -> tuple[str, ...]:
        cols: list[str] = []
        if self.col1 is not None:
            cols.append(self.col1)
        if self.col2 is not None:
            cols.append(self.col2)
        if self.box_columns is not None:
            cols.extend(self.box_columns)
        return tuple(cols)


@dataclass(frozen=True)
class SortSpec:
    column: str
    direction: str = "ascending"

    def __post_init__(self) -> None:
        if self.direction not in SORT_DIRECTIONS:
            raise ValueError(f"direction must be one of {SORT_DIRECTIONS}")
        if not self.column:
            raise ValueError("sort column must be nonempty")


@dataclass(frozen=True, kw_only=True)
class PanelSpec:
    """Declarative description of a whole linked-micromaps graphic.

    The map and id columns are implicit and always rendered first; `columns`
    holds only the additional glyph columns.
    """

    dataset: str = ""
    title1: str = ""
    title2: str = ""
    shading: str = "map"
    sort: SortSpec
    columns: tuple[GlyphColumnSpec, ...] = ()
    color_safe: bool = False

    def __post_init__(self) -> None:
        if self.shading not in SHADING_MODES:
            raise ValueError(f"shading must be one of {SHADING_MODES}")

    def title_lines(self) -> tuple[str, ...]:
        return tuple(line for line in (self.title1, self.title2) if line)


_HEX_RE = re.compile(r"^#[0-9A-Fa-f]{6}$")


@dataclass(frozen=True)
class Palette:
    group_colors: tuple[str, str, str, str, str]
    median_color: str
    tail_color: str
    base_color: str
    above_band: str
    below_band: str
    ref_line_color: str

    def __post_init__(self) -> None:
        if len(self.group_colors) != 5:
            raise ValueError("exactly 5 group colors required")
        for value in (*self.group_colors, self.median_color, self.tail_color,
                      self.base_color, self.above_band, self.below_band,
                      self.ref_line_color):
            if not _HEX_RE.match(value):
                raise ValueError(f"not a 6-digit hex color: {value!r}")

    def color(self, role: str) -> str:
        """Resolve a color role to its hex value."""
        if role.startswith("slot"):
            return self.group_colors[int(role[4:])]
        return {
            "median": self.median_color,
            "tail": self.tail_color,
            "base": self.base_color,
            "band_above": self.above_band,
            "band_below": self.below_band,
            "ref": self.ref_line_color,
        }[role]

    def all_colors(self) -> frozenset[str]:
        return frozenset(
            (*self.group_colors, self.median_color, self.tail_color,
             self.base_color, self.above_band, self.below_band,
             self.ref_line_color)
        )


DEFAULT_PALETTE = Palette(
    group_colors=("#E41A1C", "#FF7F00", "#4DAF4A", "#377EB8", "#984EA3"),
    median_color="#000000",
    tail_color="#C8C8C8",
    base_color="#F0F0F0",
    above_band="#FFF2E6",
    below_band="#E6F2FF",
    ref_line_color="#008000",
)

# Okabe-Ito hues, same neutrals.
COLOR_SAFE_PALETTE = Palette(
    group_colors=("#E69F00", "#56B4E9", "#009E73", "#CC79A7", "#0072B2"),
    median_color="#000000",
    tail_color="#C8C8C8",
    base_color="#F0F0F0",
    above_band="#FFF2E6",
    below_band="#E6F2FF",
    ref_line_color="#008000",
)


def active_palette(spec: PanelSpec) -> Palette:
    return COLOR_SAFE_PALETTE if spec.color_safe else DEFAULT_PALETTE


GROUP_SIZES: tuple[int, ...] = (5, 5, 5, 5, 5, 1, 5, 5, 5, 5, 5)
MEDIAN_GROUP_INDEX: int = 5
MEDIAN_RANK: int = 26  # 1-based


@dataclass(frozen=True)
class GroupPartition:
    """The sorted order split into perceptual groups of [5x5, 1, 5x5]."""

    groups: tuple[tuple[tuple[int, RegionId], ...], ...]
    median_index: int = MEDIAN_GROUP_INDEX

    def __post_init__(self) -> None:
        sizes = tuple(len(group) for group in self.groups)
        if sizes != GROUP_SIZES:
            raise ValueError(f"group sizes must be {GROUP_SIZES}, got {sizes}")
        expected_rank = 1
        for group in self.groups:
            for rank, _ in group:
                if rank != expected_rank:
                    raise ValueError("ranks must be contiguous and increasing")
                expected_rank += 1
        all_regions = [region for group in self.groups for _, region in group]
        if len(set(all_regions)) != REGION_COUNT:
            raise ValueError("partition must cover all 51 regions")

    def order(self) -> tuple[RegionId, ...]:
        return tuple(region for group in self.groups for _, region in group)

    @property
    def median_region(self) -> RegionId:
        return self.groups[self.median_index][0][1]

    def roles_for_group(self, group_index: int) -> tuple[tuple[RegionId, str], ...]:
        """Color role per member, in rank order: slot0..slot4, or median."""
        group = self.groups[group_index]
        if group_index == self.median_index:
            return ((group[0][1], "median"),)
        return tuple(
            (region, f"slot{i}") for i, (_, region) in enumerate(group)
        )


@dataclass(frozen=True)
class LinearScale:
    """Affine map from a data domain onto a pixel span."""

    domain_min: float
    domain_max: float
    range_min: float
    range_max: float

    def __post_init__(self) -> None:
        if not (self.domain_min < self.domain_max):
            raise ValueError("domain_min must be < domain_max")

    def px(self, value: float) -> float:
        t = (value - self.domain_min) / (self.domain_max - self.domain_min)
        return self.range_min + t * (self.range_max - self.range_min)


@dataclass(frozen=True)
class BoxStats:
    low_whisker: float
    q1: float
    median: float
    q3: float
    high_whisker: float
    outliers: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        ordered = (self.low_whisker, self.q1, self.median, self.q3, self.high_whisker)
        for a, b in zip(ordered, ordered[1:]):
            if a > b:
                raise ValueError("box statistics must be non-decreasing")
        iqr = self.q3 - self.q1
        low_fence = self.q1 - 1.5 * iqr
        high_fence = self.q3 + 1.5 * iqr
        for v in self.outliers:
            if low_fence <= v <= high_fence:
                raise ValueError(f"outlier {v} lies inside the Tukey fences")


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in page pixels (y grows downward)."""

    x: float
    y: float
    w: float
    h: float

    @property
    def x1(self) -> float:
        return self.x + self.w

    @property
    def y1(self) -> float:
        return self.y + self.h

    @property
    def cx(self) -> float:
        return self.x + self.w / 2.0

    @property
    def cy(self) -> float:
        return self.y + self.h / 2.0

    def contains(self, px: float, py: float, slack: float = 1e-6) -> bool:
        return (self.x - slack <= px <= self.x1 + slack
                and self.y - slack <= py <= self.y1 + slack)

    def inset(self, left: float, top: float, right: float, bottom: float) -> "Rect":
        return Rect(self.x + left, self.y + top,
                    self.w - left - right, self.h - top - bottom)


def _is_finite_number(value: object) -> bool:
    return isinstance(value, (int, float)) and math.isfinite(value)


@dataclass(frozen=True)
class RegionTable:
    """51-row numeric table keyed by canonical region id.

    Cells are finite floats or None (explicitly missing).
    """

    rows: Mapping[RegionId, Mapping[str, Optional[float]]]
    column_names: tuple[str, ...]
    source_name: str = ""

    def __post_init__(self) -> None:
        if set(self.rows.keys()) != set(all_region_ids()):
            raise ValueError("table must have exactly one row per region")
        if len(set(self.column_names)) != len(self.column_names):
            raise ValueError("column names must be unique")
        if any(not name for name in self.column_names):
            raise ValueError("column names must be nonempty")
        for region, row in self.rows.items():
            for column, value in row.items():
                if value is not None and not _is_finite_number(value):
                    raise ValueError(
                        f"cell {region}/{column} must be finite or None"
                    )

    def value(self, region: RegionId, column: str) -> Optional[float]:
        return self.rows[region].get(column)

    def column_values(self, column: str) -> dict[RegionId, Optional[float]]:
        return {region: self.rows[region].get(column) for region in self.rows}

    def has_column(self, name: str) -> bool:
        return name in self.column_names


@dataclass(frozen=True)
class TimeSeriesCube:
    """Per-region (x, y) series with a uniform point count."""

    rows: Mapping[RegionId, tuple[tuple[float, float], ...]]
    name: str = ""

    def __post_init__(self) -> None:
        if set(self.rows.keys()) != set(all_region_ids()):
            raise ValueError("cube must cover exactly the 51 regions")
        lengths = {len(points) for points in self.rows.values()}
        if len(lengths) != 1:
            raise ValueError("all regions must have the same point count")
        count = next(iter(lengths))
        if count < 2:
            raise ValueError("time series need at least 2 points")
        for region, points in self.rows.items():
            xs = [x for x, _ in points]
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise ValueError(f"x values not strictly increasing for {region}")

    @property
    def point_count(self) -> int:
        return len(next(iter(self.rows.values())))

    def x_values(self) -> tuple[float, ...]:
        return tuple(x for x, _ in next(iter(self.rows.values())))

    def y_extent(self) -> tuple[float, float]:
        ys = [y for points in self.rows.values() for _, y in points]
        return min(ys), max(ys)
