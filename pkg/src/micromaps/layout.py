"""Sorted order, perceptual grouping, page geometry and axis ticks.

All positional constants here (column widths, band heights, padding
fractions) are artifact decisions; only the 7.5 x 10 inch default page size
comes with the graphic's form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .model import (
    GROUP_SIZES,
    GroupPartition,
    LinearScale,
    PanelSpec,
    Rect,
    RegionId,
    RegionTable,
    SortSpec,
)

PX_PER_IN = 96.0

MAP_COL_IN = 1.5
ID_COL_IN = 0.9
MIN_GLYPH_COL_IN = 1.2
TITLE_LINE_IN = 0.35
HEADER_BAND_IN = 0.55
FOOTER_BAND_IN = 0.25
MEDIAN_ROW_FRACTION = 0.4
DOMAIN_PAD_FRACTION = 0.05

DEFAULT_PAGE_W_IN = 7.5
DEFAULT_PAGE_H_IN = 10.0


class LayoutError(ValueError):
    """Raised when the requested columns cannot fit on the page."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def sort_regions(table: RegionTable, sort: SortSpec) -> tuple[RegionId, ...]:
    """Order the regions by the sort column.

    Stable by value; missing values go last regardless of direction; ties
    break by ascending region code.
    """
    values = table.column_values(sort.column)
    present = [(v, r) for r, v in values.items() if v is not None]
    absent = sorted(r for r, v in values.items() if v is None)
    if sort.direction == "descending":
        present.sort(key=lambda pair: (-pair[0], pair[1]))
    else:
        present.sort(key=lambda pair: (pair[0], pair[1]))
    return tuple(r for _, r in present) + tuple(absent)


def perceptual_groups(order: Sequence[RegionId]) -> GroupPartition:
    """Split a full sorted order into groups of [5,5,5,5,5,1,5,5,5,5,5]."""
    if len(order) != sum(GROUP_SIZES):
        raise ValueError(f"expected {sum(GROUP_SIZES)} regions, got {len(order)}")
    groups: list[tuple[tuple[int, RegionId], ...]] = []
    rank = 1
    for size in GROUP_SIZES:
        members = tuple(
            (rank + offset, order[rank - 1 + offset]) for offset in range(size)
        )
        groups.append(members)
        rank += size
    return GroupPartition(groups=tuple(groups))


def column_scale(
    values: Sequence[Optional[float]],
    refval: Optional[float],
    range_px: tuple[float, float],
) -> LinearScale:
    """Build the shared scale for one glyph column.

    The domain covers every finite value plus the reference value, padded 5%
    on each side; an all-equal domain expands by max(1, 5% of |v|).
    """
    finite = [v for v in values if v is not None and math.isfinite(v)]
    if refval is not None:
        finite.append(refval)
    if not finite:
        raise ValueError("no finite values to scale")
    lo, hi = min(finite), max(finite)
    if lo == hi:
        pad = max(1.0, abs(lo) * DOMAIN_PAD_FRACTION)
    else:
        pad = (hi - lo) * DOMAIN_PAD_FRACTION
    return LinearScale(
        domain_min=lo - pad,
        domain_max=hi + pad,
        range_min=range_px[0],
        range_max=range_px[1],
    )


# Tick steps are 1, 2, 2.5 or 5 times a power of ten.
_STEP_MANTISSAS = (1.0, 2.0, 2.5, 5.0)
_EPS = 1e-9


def _ticks_for_step(domain_min: float, domain_max: float, step: float) -> list[float]:
    span_eps = (domain_max - domain_min) * _EPS
    first = math.ceil((domain_min - span_eps) / step)
    last = math.floor((domain_max + span_eps) / step)
    return [i * step for i in range(first, last + 1)]


def nice_ticks(scale: LinearScale, max_ticks: int) -> tuple[float, ...]:
    """Choose round tick values inside the scale domain.

    Picks the step yielding the most ticks without exceeding max_ticks;
    if every step overshoots or undershoots, falls back to the smallest
    count of at least 2.
    """
    if max_ticks < 2:
        raise ValueError("max_ticks must be >= 2")
    lo, hi = scale.domain_min, scale.domain_max
    span = hi - lo
    k_hi = math.ceil(math.log10(span)) + 1
    best: Optional[list[float]] = None
    fallback: Optional[list[float]] = None
    for k in range(k_hi, k_hi - 6, -1):
        for mantissa in _STEP_MANTISSAS:
            step = mantissa * 10.0 ** k
            ticks = _ticks_for_step(lo, hi, step)
            count = len(ticks)
            if 2 <= count <= max_ticks:
                if best is None or count > len(best):
                    best = ticks
            elif count > max_ticks:
                if fallback is None or count < len(fallback):
                    fallback = ticks
    if best is not None:
        return tuple(best)
    if fallback is not None:
        return tuple(fallback)
    raise ValueError("could not place ticks")  # pragma: no cover


def tick_label(value: float, step: float) -> str:
    """Format a tick value with just enough decimals for its step."""
    decimals = max(0, -int(math.floor(math.log10(step) + 1e-9)))
    text = f"{value:.{decimals}f}"
    return "0" if text in ("-0", "-0.0", "-0.00") else text


@dataclass(frozen=True)
class PageLayout:
    """Resolved page geometry: bands, an 11 x (2+K) panel grid, widths."""

    page_width_in: float
    page_height_in: float
    title_band: Rect
    header_band: Rect
    footer_band: Rect
    grid: tuple[tuple[Rect, ...], ...]
    column_widths_in: tuple[float, ...]

    @property
    def width_px(self) -> float:
        return self.page_width_in * PX_PER_IN

    @property
    def height_px(self) -> float:
        return self.page_height_in * PX_PER_IN

    @property
    def row_count(self) -> int:
        return len(self.grid)

    @property
    def column_count(self) -> int:
        return len(self.grid[0])

    def column_rect(self, col: int) -> Rect:
        """Bounding rect of one column across all rows."""
        top = self.grid[0][col]
        bottom = self.grid[-1][col]
        return Rect(top.x, top.y, top.w, bottom.y1 - top.y)


def layout_page(
    spec: PanelSpec,
    page_width_in: float = DEFAULT_PAGE_W_IN,
    page_height_in: float = DEFAULT_PAGE_H_IN,
) -> PageLayout:
    """Compute the page grid for a validated spec.

    Map column 1.5 in, id column 0.9 in, remaining width split equally among
    glyph columns (at least 1.2 in each or LayoutError); 11 rows with the
    median row at 40% of standard height.
    """
    glyph_count = len(spec.columns)
    widths_in = [MAP_COL_IN, ID_COL_IN]
    if glyph_count:
        glyph_w_in = (page_width_in - MAP_COL_IN - ID_COL_IN) / glyph_count
        if glyph_w_in < MIN_GLYPH_COL_IN:
            raise LayoutError(
                "WIDTH_EXCEEDED",
                f"{glyph_count} glyph columns leave {glyph_w_in:.2f} in each; "
                f"minimum is {MIN_GLYPH_COL_IN} in",
            )
        widths_in.extend([glyph_w_in] * glyph_count)

    title_h = TITLE_LINE_IN * len(spec.title_lines()) * PX_PER_IN
    header_h = HEADER_BAND_IN * PX_PER_IN
    footer_h = FOOTER_BAND_IN * PX_PER_IN
    page_w = page_width_in * PX_PER_IN
    page_h = page_height_in * PX_PER_IN

    body_h = page_h - title_h - header_h - footer_h
    if body_h <= 0:
        raise LayoutError("WIDTH_EXCEEDED", "page too short for the band layout")
    standard_h = body_h / (10 + MEDIAN_ROW_FRACTION)
    median_h = standard_h * MEDIAN_ROW_FRACTION

    title_band = Rect(0.0, 0.0, page_w, title_h)
    header_band = Rect(0.0, title_h, page_w, header_h)

    xs: list[float] = [0.0]
    for w_in in widths_in:
        xs.append(xs[-1] + w_in * PX_PER_IN)

    grid: list[tuple[Rect, ...]] = []
    y = title_h + header_h
    for row in range(11):
        row_h = median_h if row == 5 else standard_h
        grid.append(tuple(
            Rect(xs[col], y, xs[col + 1] - xs[col], row_h)
            for col in range(len(widths_in))
        ))
        y += row_h

    footer_band = Rect(0.0, y, page_w, footer_h)
    return PageLayout(
        page_width_in=page_width_in,
        page_height_in=page_height_in,
        title_band=title_band,
        header_band=header_band,
        footer_band=footer_band,
        grid=tuple(grid),
        column_widths_in=tuple(widths_in),
    )
