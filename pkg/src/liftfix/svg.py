"""Deterministic SVG rendering of certificate geometry.

The canvas is fixed at 1000x1000 with the viewBox derived from the exact
bounding box of the payload; coordinates are printed with six decimal
digits.  Rounding happens only here, at the last formatting step; no
computation ever consumes rendered coordinates.  Layer order is fixed
(body, pieces, K region, lattice points, labels) so identical payloads
yield byte-identical files.
"""

from __future__ import annotations

from .rational import rat

CANVAS = 1000
MARGIN = 60

_BODY_STYLE = 'fill="none" stroke="#1f4e79" stroke-width="2"'
_PIECE_STYLE = 'fill="#7fb2d9" fill-opacity="0.45" stroke="#2d6aa0" stroke-width="1"'
_KREGION_STYLE = 'fill="#f2c057" fill-opacity="0.35" stroke="#c78a1e" stroke-width="1"'
_CELL_STYLE = 'fill="none" stroke="#555555" stroke-width="1" stroke-dasharray="6,4"'
_POINT_STYLE = 'fill="#b03030"'
_LABEL_STYLE = 'font-family="monospace" font-size="18"'


def _fmt(x: float) -> str:
    return f"{x:.6f}"


class _Frame:
    def __init__(self, points):
        xs = [float(p[0]) for p in points] or [0.0]
        ys = [float(p[1]) for p in points] or [0.0]
        self.x0, self.x1 = min(xs), max(xs)
        self.y0, self.y1 = min(ys), max(ys)
        span = max(self.x1 - self.x0, self.y1 - self.y0, 1e-9)
        self.scale = (CANVAS - 2 * MARGIN) / span

    def map(self, p):
        x = MARGIN + (float(p[0]) - self.x0) * self.scale
        y = CANVAS - MARGIN - (float(p[1]) - self.y0) * self.scale
        return x, y


def _poly_path(frame, vertices) -> str:
    cmds = []
    for i, v in enumerate(vertices):
        x, y = frame.map(v)
        cmds.append(f"{'M' if i == 0 else 'L'} {_fmt(x)} {_fmt(y)}")
    cmds.append("Z")
    return " ".join(cmds)


def _parse_poly(obj):
    return [(rat(x), rat(y)) for x, y in obj]


def render_svg(payload: dict) -> str:
    """Render a JSON payload (kinds: figure, region, cover) to SVG text."""
    kind = payload.get("kind", "region")
    polygons = []  # (style, vertices)
    points = []  # (label, point)

    if kind == "cover":
        cell = [(0, 0), (1, 0), (1, 1), (0, 1)]
        polygons.append((_CELL_STYLE, cell))
        for piece in payload.get("pieces", []):
            polygons.append((_PIECE_STYLE, _parse_poly(piece["polygon"])))
        if payload.get("uncovered_witness"):
            points.append(("uncovered", _parse_poly([payload["uncovered_witness"]])[0]))
    else:
        if payload.get("body"):
            polygons.append((_BODY_STYLE, _parse_poly(payload["body"])))
        for piece in payload.get("pieces", []):
            polygons.append((_PIECE_STYLE, _parse_poly(piece["polygon"])))
        if payload.get("k_region"):
            polygons.append((_KREGION_STYLE, _parse_poly(payload["k_region"])))
        for name, pt in sorted(payload.get("points", {}).items()):
            points.append((name, _parse_poly([pt])[0]))
        for pt in payload.get("lattice_points", []):
            points.append(("", _parse_poly([pt])[0]))

    frame_pts = [v for _, vs in polygons for v in vs] + [p for _, p in points]
    frame = _Frame(frame_pts)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" '
        f'viewBox="0 0 {CANVAS} {CANVAS}">',
        f'<rect x="0" y="0" width="{CANVAS}" height="{CANVAS}" fill="#ffffff"/>',
    ]
    for style, vs in polygons:
        if len(vs) >= 2:
            out.append(f'<path d="{_poly_path(frame, vs)}" {style}/>')
    for label, p in points:
        x, y = frame.map(p)
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" {_POINT_STYLE}/>')
        if label:
            out.append(
                f'<text x="{_fmt(x + 8)}" y="{_fmt(y - 8)}" {_LABEL_STYLE}>{label}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
