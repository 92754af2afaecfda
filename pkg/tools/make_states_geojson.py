#!/usr/bin/env python3
"""Build the embedded simplified US state outline asset.

Each mainland state starts as one or two approximate lon/lat boxes; boxes are
projected onto the abstract y-down frame and clipped against
higher-priority neighbors so no two states overlap. AK and HI become insets
at the bottom left; DC, RI and DE become enlarged offshore markers so every
region is visibly colorable. Output: GeoJSON FeatureCollection with a "usps"
property per feature, coordinates already in frame units.

Run from the repo root:  python3 tools/make_states_geojson.py
Requires shapely (build-time only; the package runtime never needs it).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from shapely.geometry import MultiPolygon, Polygon, box
from shapely.ops import unary_union

OUT_PATH = Path(__file__).resolve().parents[1] / "src" / "micromaps" / "assets" / "us_states.geojson"

# Approximate (lon_west, lon_east, lat_south, lat_north) boxes. A state may
# list several boxes; their union is its footprint before clipping.
# Listed in priority order: earlier states keep contested area.
MAINLAND: list[tuple[str, list[tuple[float, float, float, float]]]] = [
    ("WY", [(-111.0, -104.0, 41.0, 45.0)]),
    ("CO", [(-109.0, -102.0, 37.0, 41.0)]),
    ("UT", [(-114.0, -109.0, 37.0, 42.0)]),
    ("NM", [(-109.0, -103.0, 31.3, 37.0)]),
    ("ND", [(-104.0, -96.5, 45.9, 49.0)]),
    ("SD", [(-104.0, -96.4, 42.5, 45.9)]),
    ("NE", [(-104.0, -95.3, 40.0, 43.0)]),
    ("KS", [(-102.0, -94.6, 37.0, 40.0)]),
    ("NV", [(-120.0, -114.0, 35.0, 42.0)]),
    ("AZ", [(-114.8, -109.0, 31.3, 37.0)]),
    ("OK", [(-100.0, -94.4, 33.6, 37.0)]),
    ("IA", [(-96.6, -90.1, 40.4, 43.5)]),
    ("WA", [(-124.8, -117.0, 45.5, 49.0)]),
    ("MT", [(-116.0, -104.0, 44.4, 49.0)]),
    ("ID", [(-117.2, -111.0, 42.0, 49.0)]),
    ("OR", [(-124.6, -116.5, 42.0, 46.3)]),
    ("CA", [(-124.4, -114.1, 32.5, 42.0)]),
    ("MN", [(-97.2, -92.9, 43.5, 49.0), (-92.9, -89.7, 46.7, 49.0)]),
    ("WI", [(-92.9, -86.8, 42.5, 46.9)]),
    ("IL", [(-91.5, -87.0, 37.0, 42.5)]),
    ("IN", [(-88.1, -84.8, 37.8, 41.8)]),
    ("OH", [(-84.8, -80.5, 38.4, 42.0)]),
    ("MI", [(-86.5, -82.4, 41.7, 45.8), (-86.8, -84.3, 45.4, 46.8)]),
    ("MO", [(-95.8, -89.1, 36.0, 40.6)]),
    ("AR", [(-94.6, -89.6, 33.0, 36.5)]),
    ("MS", [(-91.6, -88.1, 30.2, 35.0)]),
    ("AL", [(-88.5, -85.0, 31.0, 35.0)]),
    ("SC", [(-83.4, -78.5, 32.0, 35.0)]),
    ("GA", [(-85.6, -80.8, 30.7, 35.0)]),
    ("TN", [(-90.3, -81.7, 35.0, 36.6)]),
    ("KY", [(-89.5, -82.0, 36.6, 39.2)]),
    ("WV", [(-82.6, -77.7, 37.2, 39.7)]),
    ("MD", [(-79.5, -75.0, 38.0, 39.7)]),
    ("NC", [(-84.3, -75.5, 35.0, 36.6), (-78.5, -75.5, 33.8, 35.0)]),
    ("VA", [(-83.7, -75.2, 36.5, 39.5)]),
    ("PA", [(-80.5, -74.7, 39.7, 42.3)]),
    ("NJ", [(-75.6, -73.9, 38.9, 41.4)]),
    ("CT", [(-73.7, -71.8, 41.0, 42.05)]),
    ("MA", [(-73.5, -69.9, 42.05, 42.75), (-71.8, -69.9, 41.2, 42.05)]),
    ("VT", [(-73.45, -72.0, 42.75, 45.0)]),
    ("NH", [(-72.0, -70.7, 42.7, 45.3)]),
    ("ME", [(-71.1, -66.9, 43.0, 47.5)]),
    ("NY", [(-79.8, -73.3, 40.5, 45.0)]),
    ("TX", [(-106.6, -93.5, 25.8, 36.5)]),
    ("LA", [(-94.0, -89.0, 28.9, 33.0)]),
    ("FL", [(-87.6, -81.3, 29.6, 30.8), (-82.7, -80.0, 25.0, 30.3)]),
]

NAMES = {
    "AK": "Alaska", "AL": "Alabama", "AR": "Arkansas", "AZ": "Arizona",
    "CA": "California", "CO": "Colorado", "CT": "Connecticut",
    "DC": "District of Columbia", "DE": "Delaware", "FL": "Florida",
    "GA": "Georgia", "HI": "Hawaii", "IA": "Iowa", "ID": "Idaho",
    "IL": "Illinois", "IN": "Indiana", "KS": "Kansas", "KY": "Kentucky",
    "LA": "Louisiana", "MA": "Massachusetts", "MD": "Maryland",
    "ME": "Maine", "MI": "Michigan", "MN": "Minnesota", "MO": "Missouri",
    "MS": "Mississippi", "MT": "Montana", "NC": "North Carolina",
    "ND": "North Dakota", "NE": "Nebraska", "NH": "New Hampshire",
    "NJ": "New Jersey", "NM": "New Mexico", "NV": "Nevada",
    "NY": "New York", "OH": "Ohio", "OK": "Oklahoma", "OR": "Oregon",
    "PA": "Pennsylvania", "RI": "Rhode Island", "SC": "South Carolina",
    "SD": "South Dakota", "TN": "Tennessee", "TX": "Texas", "UT": "Utah",
    "VA": "Virginia", "VT": "Vermont", "WA": "Washington",
    "WI": "Wisconsin", "WV": "West Virginia", "WY": "Wyoming",
}

# Gutter between neighboring states, in frame units.
GUTTER = 0.25
MIN_PIECE_AREA = 0.6


def to_frame_x(lon: float) -> float:
    return (lon + 125.5) * 1.55 + 1.0


def to_frame_y(lat: float) -> float:
    return (49.5 - lat) * 1.78 + 1.0


def frame_box(lon_w: float, lon_e: float, lat_s: float, lat_n: float) -> Polygon:
    return box(to_frame_x(lon_w), to_frame_y(lat_n),
               to_frame_x(lon_e), to_frame_y(lat_s))


def marker_square(x: float, y: float, side: float) -> Polygon:
    return box(x, y, x + side, y + side)


def build_mainland() -> dict[str, MultiPolygon]:
    shapes: dict[str, MultiPolygon] = {}
    claimed = None
    for code, boxes in MAINLAND:
        footprint = unary_union([frame_box(*b) for b in boxes])
        if claimed is not None:
            footprint = footprint.difference(claimed.buffer(GUTTER, join_style=2))
        pieces = (
            list(footprint.geoms)
            if footprint.geom_type == "MultiPolygon"
            else [footprint]
        )
        kept = [p for p in pieces if p.area >= MIN_PIECE_AREA]
        if not kept:
            raise SystemExit(f"{code}: fully clipped away")
        shape = MultiPolygon(
            [Polygon(p.exterior) for p in kept]  # drop any accidental holes
        )
        shapes[code] = shape
        claimed = unary_union([claimed, shape]) if claimed is not None else shape
    return shapes


def build_insets_and_markers() -> dict[str, MultiPolygon]:
    ak = unary_union([
        box(3.0, 47.0, 17.0, 55.0),       # main block
        box(17.0, 51.0, 22.0, 54.0),      # panhandle
    ])
    hi = MultiPolygon([
        marker_square(25.0, 52.0, 2.4),
        marker_square(28.6, 53.6, 2.4),
        marker_square(32.2, 55.2, 2.4),
    ])
    return {
        "AK": MultiPolygon([ak]) if ak.geom_type == "Polygon" else ak,
        "HI": hi,
        # Enlarged offshore markers: the real areas are too small to color.
        "DE": MultiPolygon([marker_square(82.1, 20.6, 3.0)]),
        "DC": MultiPolygon([marker_square(82.1, 25.0, 3.0)]),
        "RI": MultiPolygon([marker_square(89.4, 17.4, 3.0)]),
    }


def anchor_of(shape: MultiPolygon) -> tuple[float, float]:
    largest = max(shape.geoms, key=lambda p: p.area)
    pt = largest.representative_point()
    return (round(pt.x, 2), round(pt.y, 2))


def ring_coords(poly: Polygon) -> list[list[float]]:
    ring = [[round(x, 2), round(y, 2)] for x, y in poly.exterior.coords]
    return ring


def main() -> None:
    shapes = build_mainland()
    shapes.update(build_insets_and_markers())
    if set(shapes) != set(NAMES):
        missing = sorted(set(NAMES) - set(shapes))
        raise SystemExit(f"missing states: {missing}")

    # Sanity: valid, disjoint, sensible piece counts.
    codes = sorted(shapes)
    for code in codes:
        shape = shapes[code]
        if not shape.is_valid:
            raise SystemExit(f"{code}: invalid geometry")
    for i, a in enumerate(codes):
        for b in codes[i + 1:]:
            inter = shapes[a].intersection(shapes[b])
            if inter.area > 1e-9:
                raise SystemExit(f"{a} and {b} overlap (area {inter.area:.3f})")

    features = []
    for code in codes:
        shape = shapes[code]
        polys = [ring_coords(p) for p in shape.geoms]
        geometry = (
            {"type": "Polygon", "coordinates": [polys[0]]}
            if len(polys) == 1
            else {"type": "MultiPolygon", "coordinates": [[p] for p in polys]}
        )
        features.append({
            "type": "Feature",
            "properties": {
                "usps": code,
                "name": NAMES[code],
                "anchor": list(anchor_of(shape)),
            },
            "geometry": geometry,
        })

    bounds = unary_union([s for s in shapes.values()]).bounds
    collection = {
        "type": "FeatureCollection",
        # y grows downward; unitless frame
        "frame": {"width": round(bounds[2] + 1, 2), "height": round(bounds[3] + 1, 2)},
        "features": features,
    }
    OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
    OUT_PATH.write_text(json.dumps(collection, separators=(",", ":")) + "\n")
    total_vertices = sum(
        len(p) for f in features
        for p in (f["geometry"]["coordinates"] if f["geometry"]["type"] == "Polygon"
                  else [r[0] for r in f["geometry"]["coordinates"]])
    )
    print(f"wrote {OUT_PATH} ({len(features)} features, "
          f"{total_vertices} vertices, frame {collection['frame']})")


if __name__ == "__main__":
    sys.exit(main())
