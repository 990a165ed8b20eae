"""Predicates and constructions on the unit sphere.

Points are 3-tuples of floats. An :class:`Arc` is a geodesic segment given
by its endpoints plus a ``major`` flag: a minor arc is the short way along
the great circle, a major arc the long way (length in (pi, 2*pi)).
Pointed fans need major arcs: three minor arcs always bound a convex
spherical triangle, so a K4 fan built from minor arcs cannot be pointed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateConfiguration

EPS_ANGLE = 1e-9
EPS_DET = 1e-12
EPS_NORM = 1e-12
TWO_PI = 2.0 * math.pi


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def norm(a):
    return math.sqrt(dot(a, a))


def scale(a, s):
    return (a[0] * s, a[1] * s, a[2] * s)


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def normalize(a):
    n = norm(a)
    if n == 0.0:
        raise DegenerateConfiguration("cannot normalize the zero vector")
    return (a[0] / n, a[1] / n, a[2] / n)


def as_point(xyz):
    """Validate a unit vector; raises ValueError when off the sphere."""
    p = tuple(float(c) for c in xyz)
    if len(p) != 3:
        raise ValueError("sphere points have three coordinates")
    if abs(norm(p) - 1.0) > EPS_NORM:
        raise ValueError(f"point {p!r} is not on the unit sphere")
    return p


def angular_distance(p, q):
    return math.atan2(norm(cross(p, q)), dot(p, q))


def orient(p, q, r, eps=EPS_DET):
    """Sign of det[p; q; r], zero inside the ``eps`` band."""
    d = dot(p, cross(q, r))
    if abs(d) < eps:
        return 0
    return 1 if d > 0 else -1


def tangent(at, toward, major=False):
    """Unit tangent at ``at`` pointing along the arc to ``toward``."""
    t = sub(toward, scale(at, dot(at, toward)))
    n = norm(t)
    if n < EPS_ANGLE:
        raise DegenerateConfiguration("tangent undefined for coincident or antipodal points")
    t = scale(t, 1.0 / n)
    return scale(t, -1.0) if major else t


def ccw_angle(t1, t2, at):
    """Counter-clockwise turn from ``t1`` to ``t2`` about the outward normal ``at``."""
    a = math.atan2(dot(cross(t1, t2), at), dot(t1, t2))
    return a + TWO_PI if a < 0.0 else a


@dataclass(frozen=True)
class Arc:
    p: tuple
    q: tuple
    major: bool = False

    def __post_init__(self):
        d = angular_distance(self.p, self.q)
        if d <= EPS_ANGLE or d >= math.pi - EPS_ANGLE:
            raise DegenerateConfiguration("arc endpoints coincide or are antipodal")

    @property
    def length(self):
        d = angular_distance(self.p, self.q)
        return TWO_PI - d if self.major else d

    def start_tangent(self):
        return tangent(self.p, self.q, self.major)

    def end_tangent(self):
        """Tangent at ``q`` pointing back toward ``p``."""
        return tangent(self.q, self.p, self.major)

    def reversed(self):
        return Arc(self.q, self.p, self.major)

    def param(self, s):
        """Angle from ``p`` to ``s`` along the arc direction, in [0, 2*pi)."""
        t = self.start_tangent()
        a = math.atan2(dot(s, t), dot(s, self.p))
        return a + TWO_PI if a < 0.0 else a

    def point_at(self, theta):
        t = self.start_tangent()
        c, s = math.cos(theta), math.sin(theta)
        return normalize(add(scale(self.p, c), scale(t, s)))

    def sample(self, n):
        """``n + 1`` points from ``p`` to ``q`` inclusive."""
        L = self.length
        pts = [self.point_at(L * i / n) for i in range(n)]
        pts.append(self.q)
        return pts

    def contains_interior(self, s, eps=EPS_ANGLE):
        """True when the great-circle point ``s`` lies strictly inside the arc."""
        th = self.param(s)
        return eps < th < self.length - eps


def _plane_distance(arc, s):
    n = cross(arc.p, arc.q)
    return abs(dot(s, n)) / norm(n)


def arcs_cross(a: Arc, b: Arc, eps=EPS_ANGLE) -> bool:
    """True iff the open arcs share a point; shared endpoints do not count.

    Raises DegenerateConfiguration when an endpoint of one arc touches the
    interior of the other.
    """
    for end in (b.p, b.q):
        if _plane_distance(a, end) < eps and a.contains_interior(end, eps) and \
                angular_distance(end, a.p) > eps and angular_distance(end, a.q) > eps:
            raise DegenerateConfiguration("endpoint lies on the interior of another arc")
    for end in (a.p, a.q):
        if _plane_distance(b, end) < eps and b.contains_interior(end, eps) and \
                angular_distance(end, b.p) > eps and angular_distance(end, b.q) > eps:
            raise DegenerateConfiguration("endpoint lies on the interior of another arc")
    na = cross(a.p, a.q)
    nb = cross(b.p, b.q)
    x = cross(na, nb)
    nx = norm(x)
    if nx < eps * norm(na) * norm(nb):
        # same great circle and no endpoint inside the other arc: they overlap
        # only when they are the same arc
        if {a.p, a.q} == {b.p, b.q}:
            return a.major == b.major
        return False
    x = scale(x, 1.0 / nx)
    for s in (x, scale(x, -1.0)):
        if a.contains_interior(s, eps) and b.contains_interior(s, eps):
            return True
    return False


@dataclass(frozen=True)
class AngleClass:
    value: float
    kind: str  # "Convex", "Reflex", "Degenerate"

    @property
    def convex(self):
        return self.kind == "Convex"

    @property
    def reflex(self):
        return self.kind == "Reflex"


def classify_angle(value, eps=EPS_ANGLE) -> AngleClass:
    if value < math.pi - eps:
        return AngleClass(value, "Convex")
    if value > math.pi + eps:
        return AngleClass(value, "Reflex")
    return AngleClass(value, "Degenerate")


def corner_angle(at, prev_t, next_t, eps=EPS_ANGLE):
    """Face angle at ``at`` for a counter-clockwise face.

    ``next_t`` is the tangent of the outgoing boundary arc and ``prev_t`` the
    tangent toward the previous vertex; the face interior is swept
    counter-clockwise from the former to the latter.
    """
    a = ccw_angle(next_t, prev_t, at)
    if a < eps or a > TWO_PI - eps:
        raise DegenerateConfiguration("boundary arcs leave the corner in the same direction")
    return a


def interior_angle(incoming: Arc, outgoing: Arc, at, side=1, eps=EPS_ANGLE) -> AngleClass:
    """Angle at ``at`` between ``incoming`` (ending there) and ``outgoing``.

    ``side=+1`` measures inside the face on the left of the walk
    incoming -> outgoing (counter-clockwise faces); ``side=-1`` measures
    the complementary side.
    """
    if angular_distance(incoming.q, at) > 1e-12 or angular_distance(outgoing.p, at) > 1e-12:
        raise ValueError("arcs are not incident to the corner point")
    a = corner_angle(at, incoming.end_tangent(), outgoing.start_tangent(), eps)
    if side < 0:
        a = TWO_PI - a
    return classify_angle(a, eps)


def random_rotation(rng):
    """Uniform random rotation matrix (rows) from a numpy Generator."""
    import numpy as np

    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def rotate(R, p):
    r = R @ p
    return normalize((float(r[0]), float(r[1]), float(r[2])))
