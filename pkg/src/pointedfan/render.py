"""SVG drawings of spherical tilings under stereographic projection.

``north`` / ``south`` draw the whole sphere in one picture, projected from
the south / north pole. ``both`` draws two disks: the northern and the
southern hemisphere, each a clipped projection from the opposite pole.
Every edge is one ``<g class="edge">`` group and every shaded di-gon one
``<g class="digon">`` group, whatever the number of panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sphere import normalize
from .tiling import Tiling, classify_face

PROJECTIONS = ("StereographicNorth", "StereographicSouth", "BothHemispheres")
HIGHLIGHTS = ("digons", "colors", "none")
POLE_CLEARANCE = 0.05  # minimum rad between a projection pole and the drawing
_ALIASES = {"north": "StereographicNorth", "south": "StereographicSouth",
            "both": "BothHemispheres"}


@dataclass(frozen=True)
class RenderSpec:
    projection: str = "BothHemispheres"
    samples_per_arc: int = 32
    highlight: str = "digons"

    def __post_init__(self):
        object.__setattr__(self, "projection", _ALIASES.get(self.projection, self.projection))
        if self.projection not in PROJECTIONS:
            raise ValueError(f"unknown projection {self.projection!r}")
        if self.samples_per_arc < 8:
            raise ValueError("samples_per_arc must be at least 8")
        if self.highlight not in HIGHLIGHTS:
            raise ValueError(f"unknown highlight {self.highlight!r}")


def _rot_x(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])


def _rot_y(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])


def choose_view(t: Tiling, n: int):
    """Rotation keeping both poles as far as possible from every vertex and arc.

    Deterministic: the best of a fixed list of candidate rotations.
    """
    pts = [p for a, b in t.sorted_edges() for p in t.arc(a, b).sample(n)]
    pts.extend(t.points[x] for x in t.order)
    S = np.array(pts, dtype=float)
    best, best_z = np.eye(3), np.inf
    for k in range(200):
        R = _rot_y(0.37 * k) @ _rot_x(0.23 * k)
        z = float(np.max(np.abs(S @ R[2])))
        if z < best_z - 1e-12:
            best, best_z = R, z
    if math.acos(min(1.0, best_z)) < POLE_CLEARANCE:
        raise ValueError("no projection pole clear of the drawing")
    return best


def _project(p, from_south):
    x, y, z = p
    if from_south:
        d = 1.0 + z
        return (x / d, y / d)
    d = 1.0 - z
    # mirrored so the southern disk is seen from outside the sphere
    return (-x / d, y / d)


def _fmt(v):
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def _points_attr(pts):
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)


def _face_outline(t: Tiling, fi, n, R):
    cyc = t.faces[fi]
    out = []
    for i, x in enumerate(cyc):
        y = cyc[(i + 1) % len(cyc)]
        out.extend(t.arc(x, y).sample(n)[:-1])
    return [normalize(tuple(R @ np.array(p))) for p in out]


def render_svg(t: Tiling, spec: RenderSpec = RenderSpec(), colors: dict | None = None) -> str:
    """SVG text; ``colors`` maps sorted edges to 'Red', 'Blue' or 'Flat'."""
    n = spec.samples_per_arc
    R = choose_view(t, n)
    edges = t.sorted_edges()
    arcs = {k: [normalize(tuple(R @ np.array(p))) for p in t.arc(*k).sample(n)] for k in edges}
    digons = []
    if spec.highlight == "digons":
        digons = [fi for fi in range(t.f) if classify_face(t, fi).tag == "PseudoDiGon"]
    outlines = {fi: _face_outline(t, fi, n, R) for fi in digons}

    if spec.projection == "BothHemispheres":
        panels = [(True, 0.0), (False, 2.4)]
        extent = (-1.1, -1.1, 4.6, 2.2)
    else:
        from_south = spec.projection == "StereographicNorth"
        panels = [(from_south, 0.0)]
        pts = [_project(p, from_south) for seq in arcs.values() for p in seq]
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        pad = 0.1 * max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
        extent = (min(xs) - pad, min(ys) - pad, max(xs) - min(xs) + 2 * pad,
                  max(ys) - min(ys) + 2 * pad)

    width = 800
    unit = width / extent[2]
    height = extent[3] * unit

    def tx(pt, dx):
        return ((pt[0] + dx - extent[0]) * unit, (extent[1] + extent[3] - pt[1]) * unit)

    clipped = spec.projection == "BothHemispheres"
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
    ]
    if clipped:
        lines.append("<defs>")
        for i, (_, dx) in enumerate(panels):
            cx, cy = tx((0.0, 0.0), dx)
            lines.append(f'<clipPath id="disk{i}"><circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" '
                         f'r="{_fmt(unit)}"/></clipPath>')
        lines.append("</defs>")
        for i, (_, dx) in enumerate(panels):
            cx, cy = tx((0.0, 0.0), dx)
            lines.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(unit)}" '
                         'fill="none" stroke="#999999" stroke-width="1"/>')

    big = 1e4
    for fi in digons:
        lines.append(f'<g class="digon" data-face="{fi}">')
        for i, (from_south, dx) in enumerate(panels):
            plane = [_project(p, from_south) for p in outlines[fi]]
            poly = [tx(q, dx) for q in plane]
            d = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in poly) + " Z"
            # both projections keep orientation, so a tile holding the pole
            # comes out clockwise and is the outside of its outline
            if _signed_area(plane) < 0:
                d = (f"M {_fmt(-big)} {_fmt(-big)} L {_fmt(big)} {_fmt(-big)} L {_fmt(big)} "
                     f"{_fmt(big)} L {_fmt(-big)} {_fmt(big)} Z " + d)
            clip = f' clip-path="url(#disk{i})"' if clipped else ""
            lines.append(f'<path d="{d}" fill="#bbbbbb" fill-rule="evenodd" stroke="none"{clip}/>')
        lines.append("</g>")

    for k in edges:
        stroke = "#000000"
        if colors and spec.highlight == "colors":
            stroke = {"Red": "#d62728", "Blue": "#1f77b4"}.get(colors.get(k), "#999999")
        lines.append(f'<g class="edge" data-edge="{k[0]}-{k[1]}">')
        for i, (from_south, dx) in enumerate(panels):
            poly = [tx(_project(p, from_south), dx) for p in arcs[k]]
            clip = f' clip-path="url(#disk{i})"' if clipped else ""
            lines.append(f'<polyline points="{_points_attr(poly)}" fill="none" '
                         f'stroke="{stroke}" stroke-width="2"{clip}/>')
        lines.append("</g>")

    for x in t.order:
        p = normalize(tuple(R @ np.array(t.points[x])))
        for i, (from_south, dx) in enumerate(panels):
            if clipped and (p[2] < 0) == from_south:
                continue
            cx, cy = tx(_project(p, from_south), dx)
            lines.append(f'<circle class="vertex" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" '
                         f'fill="#000000"><title>{x}</title></circle>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _signed_area(poly):
    return 0.5 * sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(poly, poly[1:] + poly[:1]))
