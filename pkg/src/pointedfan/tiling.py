"""Half-edge cell complexes on the sphere and the nice-pseudo-tiling checks.

Faces are explicit vertex cycles listed counter-clockwise as seen from
outside the sphere (the tile interior lies to the left of every boundary
arc). Edges are sorted id pairs; edges listed in ``long_arcs`` are drawn
along the major arc of their great circle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .errors import (
    CrossingEdges,
    DegenerateConfiguration,
    NonNiceTiling,
    NonSphericalComplex,
)
from .graph import Graph, edge_key
from .kernels import first_crossing
from .sphere import (
    EPS_ANGLE,
    TWO_PI,
    Arc,
    angular_distance,
    as_point,
    classify_angle,
    corner_angle,
    tangent,
)

ANGLE_SUM_TOL = 1e-9


@dataclass(frozen=True)
class TileClass:
    tag: str  # PseudoTriangle, PseudoDiGon, ConvexTile, Other
    convex_corner_count: int
    corner_count: int

    @property
    def all_convex(self):
        return self.convex_corner_count == self.corner_count


@dataclass(frozen=True)
class CountReport:
    v: int
    e: int
    c: int
    f2: int
    f3: int
    euler_residual: int
    corner_residual_a: int
    corner_residual_b: int

    @property
    def residuals_zero(self):
        return self.euler_residual == 0 and self.corner_residual_a == 0 and self.corner_residual_b == 0

    def to_json(self):
        return {
            "v": self.v,
            "e": self.e,
            "c": self.c,
            "f2": self.f2,
            "f3": self.f3,
            "euler_residual": self.euler_residual,
            "corner_residual_a": self.corner_residual_a,
            "corner_residual_b": self.corner_residual_b,
        }

    @classmethod
    def from_json(cls, d):
        return cls(**{k: int(d[k]) for k in cls.__dataclass_fields__})


@dataclass(frozen=True, eq=False)
class Tiling:
    """Validated, immutable spherical cell complex; build with :func:`build_tiling`."""

    order: tuple  # vertex ids in insertion order
    points: dict  # id -> unit 3-tuple
    edges: dict  # sorted pair -> major flag
    faces: tuple  # tuple of vertex-id cycles
    angles: tuple = field(repr=False)  # per face, per corner, float radians
    dart_face: dict = field(repr=False)  # (a, b) -> face index

    @property
    def v(self):
        return len(self.order)

    @property
    def e(self):
        return len(self.edges)

    @property
    def f(self):
        return len(self.faces)

    def arc(self, a, b) -> Arc:
        return Arc(self.points[a], self.points[b], self.edges[edge_key(a, b)])

    def is_major(self, a, b) -> bool:
        return self.edges[edge_key(a, b)]

    def sorted_edges(self):
        return sorted(self.edges)

    def graph(self) -> Graph:
        return Graph(frozenset(self.order), frozenset(self.edges))

    def corner_classes(self, fi):
        return [classify_angle(a) for a in self.angles[fi]]

    def vertex_corners(self):
        """id -> list of (face index, angle)."""
        out = {x: [] for x in self.order}
        for fi, cyc in enumerate(self.faces):
            for x, a in zip(cyc, self.angles[fi]):
                out[x].append((fi, a))
        return out

    def rotation(self, x):
        """Neighbours of ``x`` in counter-clockwise order."""
        start = next(b for (a, b) in self.dart_face if a == x)
        out = [start]
        while True:
            # next dart around x: previous vertex of the face left of x -> start
            fi = self.dart_face[(x, out[-1])]
            cyc = self.faces[fi]
            i = cyc.index(x)
            nxt = cyc[i - 1]
            if nxt == start:
                return out
            out.append(nxt)

    def left_right(self, a, b):
        """Faces left and right of the directed edge a -> b."""
        return self.dart_face[(a, b)], self.dart_face[(b, a)]

    def face_digon(self, fi):
        return classify_face(self, fi).tag == "PseudoDiGon"

    def to_json(self):
        return tiling_to_json(self)


def _corner_angles(points, edges, cyc):
    n = len(cyc)
    out = []
    for i, x in enumerate(cyc):
        prev, nxt = cyc[i - 1], cyc[(i + 1) % n]
        p = points[x]
        t_prev = tangent(p, points[prev], edges[edge_key(x, prev)])
        t_next = tangent(p, points[nxt], edges[edge_key(x, nxt)])
        out.append(corner_angle(p, t_prev, t_next))
    return tuple(out)


def _check_crossings(points, edges):
    import numpy as np

    keys = sorted(edges)
    starts = np.array([points[a] for a, _ in keys], dtype=float)
    ends = np.array([points[b] for _, b in keys], dtype=float)
    majors = np.array([edges[k] for k in keys], dtype=np.uint8)
    for i in range(len(keys) - 1):
        a, b = keys[i]
        j = first_crossing(starts[i + 1:], ends[i + 1:], majors[i + 1:],
                           points[a], points[b], edges[keys[i]], EPS_ANGLE)
        if j == -2:
            raise DegenerateConfiguration(f"arc {keys[i]!r} touches another arc")
        if j >= 0:
            raise CrossingEdges(f"arcs {keys[i]!r} and {keys[i + 1 + j]!r} cross")


def build_tiling(points, edges, faces, long_arcs=(), check_crossings=True) -> Tiling:
    """Validate combinatorics and geometry; return an immutable Tiling.

    ``points`` maps id -> xyz (or is a sequence of ``(id, xyz)``); insertion
    order is kept. Raises NonSphericalComplex, CrossingEdges or
    DegenerateConfiguration.
    """
    items = points.items() if isinstance(points, dict) else points
    pts = {}
    order = []
    for vid, xyz in items:
        if vid in pts:
            raise NonSphericalComplex(f"repeated vertex id {vid!r}")
        try:
            pts[vid] = as_point(xyz)
        except ValueError as exc:
            raise NonSphericalComplex(str(exc)) from None
        order.append(vid)
    longs = {edge_key(*e) for e in long_arcs}
    emap = {}
    for e in edges:
        a, b = tuple(e)
        if a == b or a not in pts or b not in pts:
            raise NonSphericalComplex(f"bad edge {e!r}")
        k = edge_key(a, b)
        if k in emap:
            raise NonSphericalComplex(f"parallel edge {k!r}")
        emap[k] = k in longs
    if not longs <= set(emap):
        raise NonSphericalComplex("long_arcs lists an unknown edge")
    for k in emap:
        a, b = k
        d = angular_distance(pts[a], pts[b])
        if d <= EPS_ANGLE or d >= math.pi - EPS_ANGLE:
            raise DegenerateConfiguration(f"edge {k!r} joins coincident or antipodal points")

    cycles = tuple(tuple(c) for c in faces)
    dart_face = {}
    for fi, cyc in enumerate(cycles):
        if len(cyc) < 3:
            raise NonSphericalComplex(f"face {fi} has fewer than 3 corners")
        if len(set(cyc)) != len(cyc):
            raise NonSphericalComplex(f"face {fi} repeats a vertex")
        for i, a in enumerate(cyc):
            b = cyc[(i + 1) % len(cyc)]
            if edge_key(a, b) not in emap:
                raise NonSphericalComplex(f"face {fi} uses missing edge {(a, b)!r}")
            if (a, b) in dart_face:
                raise NonSphericalComplex(f"half-edge {(a, b)!r} used twice")
            dart_face[(a, b)] = fi
    for a, b in emap:
        if (a, b) not in dart_face or (b, a) not in dart_face:
            raise NonSphericalComplex(f"edge {(a, b)!r} lacks a twin half-edge")
    for x in order:
        if not any(a == x for a, _ in dart_face):
            raise NonSphericalComplex(f"vertex {x!r} is isolated")
    if len(order) - len(emap) + len(cycles) != 2:
        raise NonSphericalComplex("Euler relation v - e + f = 2 fails")

    angles = tuple(_corner_angles(pts, emap, cyc) for cyc in cycles)
    t = Tiling(tuple(order), pts, emap, cycles, angles, dart_face)
    # one rotation cycle per vertex (no pinched vertices)
    for x in order:
        deg = sum(1 for a, _ in dart_face if a == x)
        if len(t.rotation(x)) != deg:
            raise NonSphericalComplex(f"vertex {x!r} is pinched")
    sums = {x: 0.0 for x in order}
    for cyc, angs in zip(cycles, angles):
        for x, a in zip(cyc, angs):
            sums[x] += a
    for x, s in sums.items():
        if abs(s - TWO_PI) > ANGLE_SUM_TOL:
            raise NonSphericalComplex(
                f"angles at {x!r} sum to {s!r}, not 2*pi (face order or orientation)"
            )
    if check_crossings:
        _check_crossings(pts, emap)
    return t


def classify_face(t: Tiling, fi) -> TileClass:
    classes = t.corner_classes(fi)
    for c in classes:
        if c.kind == "Degenerate":
            raise DegenerateConfiguration(f"flat corner in face {fi}")
    n = len(classes)
    convex = sum(1 for c in classes if c.convex)
    if convex == 3:
        tag = "PseudoTriangle"
    elif convex == 2:
        tag = "PseudoDiGon"
    elif convex == n:
        tag = "ConvexTile"
    else:
        tag = "Other"
    return TileClass(tag, convex, n)


def is_pointed(t: Tiling):
    """(all pointed?, sorted-by-order list of non-pointed vertices)."""
    bad = []
    for x, corners in t.vertex_corners().items():
        kinds = [classify_angle(a).kind for _, a in corners]
        if "Degenerate" in kinds:
            raise DegenerateConfiguration(f"flat angle at vertex {x!r}")
        if kinds.count("Reflex") != 1:
            bad.append(x)
    return not bad, bad


def is_nice(t: Tiling):
    """(nice?, witness string naming the first violation or None)."""
    ok, bad = is_pointed(t)
    if not ok:
        return False, f"vertex {bad[0]!r} is not pointed"
    for fi in range(t.f):
        tag = classify_face(t, fi).tag
        if tag not in ("PseudoTriangle", "PseudoDiGon"):
            return False, f"face {fi} is {tag}"
    return True, None


def digon_count(t: Tiling) -> int:
    return sum(1 for fi in range(t.f) if classify_face(t, fi).tag == "PseudoDiGon")


def count_report(t: Tiling) -> CountReport:
    f2 = f3 = c = 0
    for fi in range(t.f):
        cls = classify_face(t, fi)
        c += cls.convex_corner_count
        if cls.tag == "PseudoDiGon":
            f2 += 1
        elif cls.tag == "PseudoTriangle":
            f3 += 1
        else:
            raise NonNiceTiling(f"face {fi} is {cls.tag}")
    v, e = t.v, t.e
    return CountReport(
        v=v,
        e=e,
        c=c,
        f2=f2,
        f3=f3,
        euler_residual=v - e + f2 + f3 - 2,
        corner_residual_a=c - (2 * f2 + 3 * f3),
        corner_residual_b=c - (2 * e - v),
    )


def faces_from_rotation(rotation: dict):
    """Trace counter-clockwise faces from a ccw rotation system."""
    seen = set()
    faces = []
    for u in rotation:
        for v in rotation[u]:
            if (u, v) in seen:
                continue
            cyc = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                cyc.append(a)
                r = rotation[b]
                c = r[(r.index(a) - 1) % len(r)]
                a, b = b, c
            faces.append(tuple(cyc))
    return faces


def geometric_rotation(points, edges, x):
    """Neighbours of ``x`` sorted counter-clockwise by tangent direction."""
    from .sphere import ccw_angle

    nbrs = sorted(b if a == x else a for (a, b) in edges if x in (a, b))
    p = points[x]
    ts = [tangent(p, points[y], edges[edge_key(x, y)]) for y in nbrs]
    ang = [ccw_angle(ts[0], t, p) for t in ts]
    return [y for _, y in sorted(zip(ang, nbrs), key=lambda z: z[0])]


def tiling_from_geometry(points, edges, long_arcs=()) -> Tiling:
    """Infer faces from the geometric rotation at each vertex, then validate."""
    pts = dict(points.items() if isinstance(points, dict) else points)
    longs = {edge_key(*e) for e in long_arcs}
    emap = {edge_key(*e): edge_key(*e) in longs for e in edges}
    rot = {x: geometric_rotation(pts, emap, x) for x in pts}
    return build_tiling(pts, list(emap), faces_from_rotation(rot), long_arcs=longs)


# -- JSON ---------------------------------------------------------------------


def tiling_to_json(t: Tiling) -> dict:
    out = {
        "vertices": [{"id": x, "xyz": list(t.points[x])} for x in t.order],
        "edges": [list(e) for e in t.sorted_edges()],
        "faces": [list(c) for c in t.faces],
    }
    longs = [list(e) for e in t.sorted_edges() if t.edges[e]]
    if longs:
        out["long_arcs"] = longs
    return out


def tiling_from_json(d: dict) -> Tiling:
    try:
        pts = [(v["id"], v["xyz"]) for v in d["vertices"]]
        edges = [tuple(e) for e in d["edges"]]
        faces = [tuple(f) for f in d["faces"]]
        longs = [tuple(e) for e in d.get("long_arcs", [])]
    except (KeyError, TypeError) as exc:
        raise NonSphericalComplex(f"tiling JSON malformed: {exc}") from None
    return build_tiling(pts, edges, faces, long_arcs=longs)


def octahedral_tiling() -> Tiling:
    """Six axis points, twelve quarter-circle arcs, eight octants."""
    pts = {
        "+x": (1.0, 0.0, 0.0), "-x": (-1.0, 0.0, 0.0),
        "+y": (0.0, 1.0, 0.0), "-y": (0.0, -1.0, 0.0),
        "+z": (0.0, 0.0, 1.0), "-z": (0.0, 0.0, -1.0),
    }
    edges = [
        (a, b) for a, b in itertools.combinations(pts, 2)
        if abs(sum(p * q for p, q in zip(pts[a], pts[b]))) < 0.5
    ]
    return tiling_from_geometry(pts, edges)
