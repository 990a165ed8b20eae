"""Self-stresses of spherical frameworks and their liftings to virtual polytopes.

Conventions
-----------
Edges are sorted id pairs ``(a, b)``. The edge vector of ``a -> b`` is
``m_ab = s * (p_a x p_b)`` with ``s = -1`` on major arcs; it is the normal of
the edge plane pointing into the tile left of ``a -> b``. A stress ``w`` is
in equilibrium when ``sum_b w_ab * m_ab = 0`` at every vertex ``a``
(``m_ba = -m_ab``). A tile linear ``a_T`` defines the support function
``x -> a_T . x`` on the cone over ``T``; across the edge,
``a_left - a_right = w_ab * m_ab``.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateJump, LiftInconsistent, NotASelfStress, NotNiceFan
from .sphere import cross
from .tiling import Tiling, classify_angle, digon_count, is_nice, is_pointed

EPS_EQ = 1e-8
SVD_REL_TOL = 1e-10


@dataclass(frozen=True)
class Stress:
    weights: dict  # sorted edge -> float

    def scaled(self, lam: float) -> "Stress":
        return Stress({k: lam * w for k, w in self.weights.items()})

    def vector(self, edges) -> np.ndarray:
        return np.array([self.weights[k] for k in edges], dtype=float)

    def to_json(self):
        return [[a, b, w] for (a, b), w in sorted(self.weights.items())]


def edge_vector(t: Tiling, a, b) -> np.ndarray:
    m = np.array(cross(t.points[a], t.points[b]))
    return -m if t.is_major(a, b) else m


def equilibrium_matrix(t: Tiling) -> np.ndarray:
    """3v x e matrix; column (a, b) holds m_ab in block a and -m_ab in block b."""
    index = {x: i for i, x in enumerate(t.order)}
    edges = t.sorted_edges()
    A = np.zeros((3 * t.v, len(edges)))
    for j, (a, b) in enumerate(edges):
        m = edge_vector(t, a, b)
        A[3 * index[a]:3 * index[a] + 3, j] = m
        A[3 * index[b]:3 * index[b] + 3, j] = -m
    return A


def equilibrium_residual(t: Tiling, s: Stress) -> float:
    """Largest vertex force norm."""
    r = equilibrium_matrix(t) @ s.vector(t.sorted_edges())
    return float(np.max(np.linalg.norm(r.reshape(-1, 3), axis=1))) if t.v else 0.0


def self_stress_basis(t: Tiling, rel_tol: float = SVD_REL_TOL) -> list:
    """Orthonormal null-space basis of the equilibrium matrix."""
    A = equilibrium_matrix(t)
    edges = t.sorted_edges()
    if not edges:
        return []
    _, sv, vt = np.linalg.svd(A, full_matrices=True)
    smax = sv[0] if sv.size else 0.0
    rank = int(np.sum(sv > rel_tol * smax)) if smax > 0 else 0
    basis = []
    for row in vt[rank:]:
        # sign gauge: the largest entry (first on ties) is positive
        i = int(np.argmax(np.abs(row)))
        if row[i] < 0:
            row = -row
        basis.append(Stress({k: float(w) for k, w in zip(edges, row)}))
    return basis


def stress_dimension(t: Tiling) -> int:
    return len(self_stress_basis(t))


@dataclass(frozen=True)
class VirtualPolytope:
    fan: Tiling
    stress: Stress
    tile_linears: tuple  # per face index, 3-tuple
    closure_residual: float
    root: int = 0


def _dual_order(t: Tiling, root: int, order: str):
    """(parent dart, face) pairs of a spanning tree of the dual graph."""
    seen = {root}
    tree = []
    frontier = deque([root])
    while frontier:
        f = frontier.popleft() if order == "bfs" else frontier.pop()
        cyc = t.faces[f]
        darts = [(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]
        if order != "bfs":
            darts.reverse()
        for x, y in darts:
            g = t.dart_face[(y, x)]
            if g not in seen:
                seen.add(g)
                tree.append(((x, y), g))
                frontier.append(g)
    return tree


def lift(t: Tiling, s: Stress, root: int = 0, order: str = "bfs") -> VirtualPolytope:
    """Integrate the stress into one linear functional per tile (``a_root = 0``)."""
    if not 0 <= root < t.f:
        raise LiftInconsistent(f"root face {root} out of range")
    scale_ = max(1.0, max((abs(w) for w in s.weights.values()), default=0.0))
    if equilibrium_residual(t, s) > EPS_EQ * scale_:
        raise NotASelfStress("stress is not in equilibrium")
    lin = {root: np.zeros(3)}
    for (x, y), g in _dual_order(t, root, order):
        f = t.dart_face[(x, y)]
        w = s.weights[(x, y) if (x, y) in t.edges else (y, x)]
        m = edge_vector(t, x, y)
        lin[g] = lin[f] - w * m
    if len(lin) != t.f:
        raise LiftInconsistent("dual graph is disconnected")
    resid = 0.0
    for (a, b), w in s.weights.items():
        left, right = t.dart_face[(a, b)], t.dart_face[(b, a)]
        r = lin[left] - lin[right] - w * edge_vector(t, a, b)
        resid = max(resid, float(np.linalg.norm(r)))
    if resid >= EPS_EQ * scale_:
        raise LiftInconsistent(f"closure residual {resid:.3e}")
    linears = tuple(tuple(float(c) for c in lin[f]) for f in range(t.f))
    return VirtualPolytope(t, s, linears, resid, root)


def is_hyperbolic_certificate(vp: VirtualPolytope) -> str:
    """Pointed fan => hyperbolic. Returns 'CertifiedHyperbolic' or 'NotCertified'."""
    ok, _ = is_pointed(vp.fan)
    return "CertifiedHyperbolic" if ok else "NotCertified"


def is_simplicial(vp: VirtualPolytope) -> bool:
    """All fan tiles are 3-cycles (pointedness is then also necessary)."""
    return all(len(c) == 3 for c in vp.fan.faces)


def horn_count(vp: VirtualPolytope) -> int:
    ok, why = is_nice(vp.fan)
    if not ok:
        raise NotNiceFan(why)
    return digon_count(vp.fan)


def _edge_color(vp: VirtualPolytope, a, b):
    t = vp.fan
    left, right = t.dart_face[(a, b)], t.dart_face[(b, a)]
    jump = np.subtract(vp.tile_linears[right], vp.tile_linears[left])
    if np.linalg.norm(jump) < EPS_EQ:
        return None
    # the edge plane normal m_ab points into the left tile; at the arc
    # midpoint the direction -m_ab is tangent and points into the right one
    m = edge_vector(t, a, b)
    step = -m / np.linalg.norm(m)
    return "Red" if float(np.dot(jump, step)) > 0 else "Blue"


def color_edges(vp: VirtualPolytope) -> dict:
    """Edge -> 'Red' (support function concave up across it) or 'Blue'."""
    colors = {}
    for a, b in vp.fan.sorted_edges():
        c = _edge_color(vp, a, b)
        if c is None:
            raise DegenerateJump(f"support function is flat across {(a, b)!r}")
        colors[(a, b)] = c
    return colors


def partial_colors(vp: VirtualPolytope) -> dict:
    """Like color_edges, but unstressed edges map to 'Flat' instead of raising.

    Laman-plus-one graphs that are not rigidity circuits have such edges.
    """
    return {(a, b): _edge_color(vp, a, b) or "Flat" for a, b in vp.fan.sorted_edges()}


@dataclass(frozen=True)
class Mesh:
    vertices: tuple  # 3-tuples
    faces: tuple  # index cycles

    def to_obj(self) -> str:
        lines = ["# reciprocal surface: one vertex per tile, one face per fan vertex"]
        for p in self.vertices:
            lines.append("v " + " ".join(repr(float(c)) for c in p))
        for f in self.faces:
            lines.append("f " + " ".join(str(i + 1) for i in f))
        return "\n".join(lines) + "\n"


def reciprocal_surface(vp: VirtualPolytope) -> Mesh:
    t = vp.fan
    faces = []
    for x in t.order:
        faces.append(tuple(t.dart_face[(x, y)] for y in t.rotation(x)))
    return Mesh(tuple(vp.tile_linears), tuple(faces))


def _rotation_from_smallest(t: Tiling, x):
    r = t.rotation(x)
    i = r.index(min(r))
    return r[i:] + r[:i]


def survey_rows(vp: VirtualPolytope, source: str = ""):
    """Edge rows (color, stress sign) and vertex rows (reflex corner position)."""
    t = vp.fan
    colors = partial_colors(vp)
    rows = []
    for k in t.sorted_edges():
        w = vp.stress.weights[k]
        sign = "0" if colors[k] == "Flat" else ("+" if w > 0 else "-")
        rows.append({
            "source": source, "kind": "edge", "id": f"{k[0]}-{k[1]}",
            "color": colors[k], "sign": sign,
            "degree": "", "reflex_position": "",
        })
    corners = t.vertex_corners()
    for x in t.order:
        ring = _rotation_from_smallest(t, x)
        angle_at = {fi: a for fi, a in corners[x]}
        reflex = [i for i, y in enumerate(ring) if classify_angle(angle_at[t.dart_face[(x, y)]]).reflex]
        rows.append({
            "source": source, "kind": "vertex", "id": str(x),
            "color": "", "sign": "",
            "degree": len(ring), "reflex_position": reflex[0] if len(reflex) == 1 else "",
        })
    return rows


SURVEY_FIELDS = ["source", "kind", "id", "color", "sign", "degree", "reflex_position"]


def survey_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SURVEY_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def polytope_to_json(vp: VirtualPolytope) -> dict:
    colors = partial_colors(vp)
    try:
        horns = horn_count(vp)
    except NotNiceFan:
        horns = None
    return {
        "stress": vp.stress.to_json(),
        "tile_linears": [list(a) for a in vp.tile_linears],
        "root_face": vp.root,
        "closure_residual": vp.closure_residual,
        "certificate": is_hyperbolic_certificate(vp),
        "simplicial": is_simplicial(vp),
        "horn_count": horns,
        "colors": [[a, b, colors[(a, b)]] for a, b in vp.fan.sorted_edges()],
    }
