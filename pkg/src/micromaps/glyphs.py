"""Drawable geometry for the statistical glyph panels.

Builders turn one perceptual group's data into primitives whose colors are
referenced by role only (slot0..slot4, median, tail, base, ref); hex
resolution happens in the emitter. All coordinates stay inside the owning
panel rectangle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .model import BoxStats, LinearScale, Rect, RegionId, TimeSeriesCube

# Inner padding between the panel rect and the plot area, px.
PLOT_PAD_X = 4.0
PLOT_PAD_Y = 2.5
LAB4_STRIP_PX = 9.0  # extra left strip when a rotated y-axis label is present

DOT_RADIUS = 2.4
ARROW_HEAD_LEN = 4.5
ARROW_HEAD_HALF_W = 1.9
REF_DASH = (4.0, 3.0)
SMALL_FONT = 7.0


@dataclass(frozen=True)
class Primitive:
    """One drawable mark; interpretation of `points` depends on `shape`.

    line: (p1, p2)            circle: (center,) + radius
    polyline/polygon: vertex list      rect: (top_left, bottom_right)
    text: (anchor,) + text/font_size/anchor/rotate
    """

    shape: str
    points: tuple[tuple[float, float], ...]
    role: str
    stroke_role: Optional[str] = None
    width: float = 1.0
    dash: Optional[tuple[float, float]] = None
    radius: float = 0.0
    text: str = ""
    font_size: float = 0.0
    anchor: str = "start"
    rotate: Optional[float] = None
    region: Optional[str] = None


@dataclass(frozen=True)
class GlyphPanelGeometry:
    rect: Rect
    kind: str
    primitives: tuple[Primitive, ...] = ()

    def clip_violations(self, slack: float = 0.51) -> list[Primitive]:
        """Primitives with any coordinate outside the panel rectangle."""
        bad = []
        for prim in self.primitives:
            for px, py in prim.points:
                if not self.rect.contains(px, py, slack=slack + 1e-6):
                    bad.append(prim)
                    break
        return bad


def plot_box(rect: Rect, has_lab4: bool) -> Rect:
    """Inner plot area of a glyph panel; identical left/right insets per
    column keep the shared x-scale aligned across rows."""
    left = PLOT_PAD_X + (LAB4_STRIP_PX if has_lab4 else 0.0)
    return rect.inset(left, PLOT_PAD_Y, PLOT_PAD_X, PLOT_PAD_Y)


def row_centers(plot: Rect, count: int) -> list[float]:
    band = plot.h / count
    return [plot.y + band * (i + 0.5) for i in range(count)]


def _gridlines(plot: Rect, scale: LinearScale,
               ticks: Sequence[float]) -> list[Primitive]:
    prims = []
    for tick in ticks:
        x = scale.px(tick)
        prims.append(Primitive(
            shape="line",
            points=((x, plot.y), (x, plot.y1)),
            role="tail",
            width=0.4,
        ))
    return prims


def _ref_line(plot: Rect, scale: LinearScale, refval: float) -> Primitive:
    x = scale.px(refval)
    return Primitive(
        shape="line",
        points=((x, plot.y), (x, plot.y1)),
        role="ref",
        width=1.0,
        dash=REF_DASH,
    )


def _lab4_text(rect: Rect, plot: Rect, lab4: str) -> Primitive:
    x = rect.x + LAB4_STRIP_PX * 0.7
    return Primitive(
        shape="text",
        points=((x, plot.cy),),
        role="median",
        text=lab4,
        font_size=SMALL_FONT,
        anchor="middle",
        rotate=-90.0,
    )


def build_dot_panel(
    roles: Sequence[tuple[RegionId, str]],
    scale: LinearScale,
    values: dict[RegionId, Optional[float]],
    rect: Rect,
    refval: Optional[float] = None,
    ticks: Sequence[float] = (),
) -> GlyphPanelGeometry:
    """One filled circle per region at its value; missing values draw nothing
    (the validation report already carries the warning)."""
    plot = plot_box(rect, has_lab4=False)
    prims = _gridlines(plot, scale, ticks)
    if refval is not None:
        prims.append(_ref_line(plot, scale, refval))
    centers = row_centers(plot, len(roles))
    for (region, role), cy in zip(roles, centers):
        value = values.get(region)
        if value is None:
            continue
        prims.append(Primitive(
            shape="circle",
            points=((scale.px(value), cy),),
            role=role,
            radius=DOT_RADIUS,
            region=str(region),
        ))
    return GlyphPanelGeometry(rect=rect, kind="dot", primitives=tuple(prims))


def _arrow_head(x_tail: float, x_head: float, cy: float) -> tuple[tuple[float, float], ...]:
    direction = 1.0 if x_head >= x_tail else -1.0
    length = min(ARROW_HEAD_LEN, abs(x_head - x_tail))
    back = x_head - direction * length
    return (
        (x_head, cy),
        (back, cy - ARROW_HEAD_HALF_W),
        (back, cy + ARROW_HEAD_HALF_W),
    )


def build_arrow_panel(
    roles: Sequence[tuple[RegionId, str]],
    scale: LinearScale,
    tail_values: dict[RegionId, Optional[float]],
    head_values: dict[RegionId, Optional[float]],
    rect: Rect,
    refval: Optional[float] = None,
    ticks: Sequence[float] = (),
    warnings: Optional[list[str]] = None,
) -> GlyphPanelGeometry:
    """An arrow from tail to head per region; zero-length arrows fall back to
    a circle so the mark stays visible."""
    plot = plot_box(rect, has_lab4=False)
    prims = _gridlines(plot, scale, ticks)
    if refval is not None:
        prims.append(_ref_line(plot, scale, refval))
    centers = row_centers(plot, len(roles))
    for (region, role), cy in zip(roles, centers):
        tail = tail_values.get(region)
        head = head_values.get(region)
        if tail is None or head is None:
            continue
        if tail == head:
            if warnings is not None:
                warnings.append(f"zero-length arrow for {region}; drawn as a dot")
            prims.append(Primitive(
                shape="circle",
                points=((scale.px(head), cy),),
                role=role,
                radius=DOT_RADIUS * 0.8,
                region=str(region),
            ))
            continue
        x_tail, x_head = scale.px(tail), scale.px(head)
        prims.append(Primitive(
            shape="line",
            points=((x_tail, cy), (x_head, cy)),
            role=role,
            width=1.3,
            region=str(region),
        ))
        prims.append(Primitive(
            shape="polygon",
            points=_arrow_head(x_tail, x_head, cy),
            role=role,
            region=str(region),
        ))
    return GlyphPanelGeometry(rect=rect, kind="arrow", primitives=tuple(prims))


def build_ts_panel(
    roles: Sequence[tuple[RegionId, str]],
    cube: TimeSeriesCube,
    x_scale: LinearScale,
    y_domain: tuple[float, float],
    rect: Rect,
    lab4: Optional[str] = None,
    ticks: Sequence[float] = (),
) -> GlyphPanelGeometry:
    """One polyline per group member; the y scale domain is shared by every
    panel of the column so slopes compare across groups."""
    plot = plot_box(rect, has_lab4=lab4 is not None)
    y_scale = LinearScale(
        domain_min=y_domain[0],
        domain_max=y_domain[1],
        range_min=plot.y1,
        range_max=plot.y,
    )
    prims = _gridlines(plot, x_scale, ticks)
    for region, role in roles:
        points = tuple(
            (x_scale.px(x), y_scale.px(y)) for x, y in cube.rows[region]
        )
        prims.append(Primitive(
            shape="polyline",
            points=points,
            role=role,
            width=1.1,
            region=str(region),
        ))
    if lab4:
        prims.append(_lab4_text(rect, plot, lab4))
    return GlyphPanelGeometry(rect=rect, kind="ts", primitives=tuple(prims))


def build_scatdot_panel(
    roles: Sequence[tuple[RegionId, str]],
    x_values: dict[RegionId, Optional[float]],
    y_values: dict[RegionId, Optional[float]],
    x_scale: LinearScale,
    y_domain: tuple[float, float],
    rect: Rect,
    lab4: Optional[str] = None,
    ticks: Sequence[float] = (),
) -> GlyphPanelGeometry:
    """All 51 points in the base color with the group's members overdrawn in
    slot colors, so each panel carries its own context."""
    plot = plot_box(rect, has_lab4=lab4 is not None)
    y_scale = LinearScale(
        domain_min=y_domain[0],
        domain_max=y_domain[1],
        range_min=plot.y1,
        range_max=plot.y,
    )
    prims = _gridlines(plot, x_scale, ticks)

    def point_of(region: RegionId) -> Optional[tuple[float, float]]:
        x, y = x_values.get(region), y_values.get(region)
        if x is None or y is None:
            return None
        return (x_scale.px(x), y_scale.px(y))

    for region in sorted(x_values):
        pt = point_of(region)
        if pt is None:
            continue
        prims.append(Primitive(
            shape="circle", points=(pt,), role="base", radius=1.6,
        ))
    for region, role in roles:
        pt = point_of(region)
        if pt is None:
            continue
        prims.append(Primitive(
            shape="circle", points=(pt,), role=role, radius=2.0,
            region=str(region),
        ))
    if lab4:
        prims.append(_lab4_text(rect, plot, lab4))
    return GlyphPanelGeometry(rect=rect, kind="scatdot", primitives=tuple(prims))


def five_number_summary(sample: Sequence[float]) -> BoxStats:
    """Five-number summary with interpolated quartiles and Tukey fences.

    Quartiles interpolate linearly at position p*(n-1) over the sorted
    sample; whiskers reach the most extreme data inside 1.5*IQR beyond the
    quartiles; anything further out is an outlier.
    """
    values = sorted(float(v) for v in sample)
    n = len(values)
    if n < 5:
        raise ValueError("boxplot sample needs at least 5 values")
    if any(not math.isfinite(v) for v in values):
        raise ValueError("boxplot sample must be finite")

    def quantile(p: float) -> float:
        pos = p * (n - 1)
        lo = math.floor(pos)
        hi = math.ceil(pos)
        if lo == hi:
            return values[lo]
        frac = pos - lo
        return values[lo] * (1 - frac) + values[hi] * frac

    q1, med, q3 = quantile(0.25), quantile(0.5), quantile(0.75)
    iqr = q3 - q1
    low_fence = q1 - 1.5 * iqr
    high_fence = q3 + 1.5 * iqr
    inside = [v for v in values if low_fence <= v <= high_fence]
    outliers = tuple(v for v in values if v < low_fence or v > high_fence)
    return BoxStats(
        low_whisker=min(inside),
        q1=q1,
        median=med,
        q3=q3,
        high_whisker=max(inside),
        outliers=outliers,
    )


def build_box_panel(
    roles: Sequence[tuple[RegionId, str]],
    stats: dict[RegionId, Optional[BoxStats]],
    scale: LinearScale,
    rect: Rect,
    refval: Optional[float] = None,
    ticks: Sequence[float] = (),
) -> GlyphPanelGeometry:
    """A horizontal box-and-whisker row per region."""
    plot = plot_box(rect, has_lab4=False)
    prims = _gridlines(plot, scale, ticks)
    if refval is not None:
        prims.append(_ref_line(plot, scale, refval))
    centers = row_centers(plot, len(roles))
    band = plot.h / len(roles)
    half = min(band * 0.32, 4.0)
    for (region, role), cy in zip(roles, centers):
        st = stats.get(region)
        if st is None:
            continue
        x_low = scale.px(st.low_whisker)
        x_q1 = scale.px(st.q1)
        x_med = scale.px(st.median)
        x_q3 = scale.px(st.q3)
        x_high = scale.px(st.high_whisker)
        prims.append(Primitive(
            shape="line", points=((x_low, cy), (x_q1, cy)),
            role=role, width=0.8,
        ))
        prims.append(Primitive(
            shape="line", points=((x_q3, cy), (x_high, cy)),
            role=role, width=0.8,
        ))
        prims.append(Primitive(
            shape="rect",
            points=((x_q1, cy - half), (x_q3, cy + half)),
            role=role,
            region=str(region),
        ))
        tick_role = "base" if role == "median" else "median"
        prims.append(Primitive(
            shape="line",
            points=((x_med, cy - half), (x_med, cy + half)),
            role=tick_role,
            width=1.0,
        ))
        for outlier in st.outliers:
            prims.append(Primitive(
                shape="circle",
                points=((scale.px(outlier), cy),),
                role=role,
                radius=1.1,
            ))
    return GlyphPanelGeometry(rect=rect, kind="boxplot", primitives=tuple(prims))
