"""Random forward Henneberg constructions.

By default steps are drawn on a combinatorial sphere drawing (a rotation
system), so every generated graph is planar: H1 joins two vertices of one
face, H2 splits an edge and joins a vertex of a face next to it. With
``planar=False`` the attach vertices are arbitrary.
"""

from __future__ import annotations

import random

from .graph import (
    Graph,
    HennebergSequence,
    HennebergStep,
    apply_step,
    classify_sparsity,
    complete_graph,
)
from .tiling import faces_from_rotation

# ccw rotation of a planar K4 and of a single edge
_K4_ROT = {0: [1, 2, 3], 1: [0, 3, 2], 2: [0, 1, 3], 3: [0, 2, 1]}
_EDGE_ROT = {0: [1], 1: [0]}


def _insert_after(rot, z, nxt, w):
    r = rot[z]
    i = r.index(nxt) + 1
    rot[z] = r[:i] + [w] + r[i:]


def random_step(g: Graph, rot: dict | None, rng: random.Random, new_vertex):
    """Draw one H1/H2 step; returns (step, new rotation or None)."""
    verts = g.sorted_vertices()
    edges = g.sorted_edges()
    w = new_vertex
    if rot is None:
        if rng.random() < 0.5 or len(verts) < 3:
            u, v = rng.sample(verts, 2)
            return HennebergStep("H1", w, attach=tuple(sorted((u, v)))), None
        a, b = rng.choice(edges)
        c = rng.choice([x for x in verts if x not in (a, b)])
        return HennebergStep("H2", w, split_edge=(a, b), third=c), None

    faces = faces_from_rotation(rot)
    if rng.random() < 0.5 or len(verts) < 3:
        face = rng.choice(faces)
        if len(face) < 2:
            face = faces[0]
        u, v = rng.sample(list(face), 2)
        new = {x: list(r) for x, r in rot.items()}
        for z in (u, v):
            _insert_after(new, z, face[(face.index(z) + 1) % len(face)], w)
        new[w] = [u, v]
        return HennebergStep("H1", w, attach=tuple(sorted((u, v)))), new
    a, b = rng.choice(edges)
    if rng.random() < 0.5:
        a, b = b, a
    # face left of a -> b
    face = next(f for f in faces if any(f[i] == a and f[(i + 1) % len(f)] == b for i in range(len(f))))
    others = [x for x in face if x not in (a, b)]
    if not others:
        return random_step(g, rot, rng, new_vertex)
    c = rng.choice(others)
    new = {x: list(r) for x, r in rot.items()}
    new[a][new[a].index(b)] = w
    new[b][new[b].index(a)] = w
    _insert_after(new, c, face[(face.index(c) + 1) % len(face)], w)
    # walking the face a -> b -> ... -> c -> ... back to a, w sees b, a, c
    new[w] = [a, c, b]
    if len(faces_from_rotation(new)) != len(faces) + 1:
        new[w] = [a, b, c]
    return HennebergStep("H2", w, split_edge=tuple(sorted((a, b))), third=c), new


def random_sequence(steps: int, base: str = "k4", seed: int = 0, planar: bool = True):
    """Random Henneberg sequence with integer vertex ids; returns (sequence, graph)."""
    rng = random.Random(seed)
    if base == "k4":
        g = complete_graph(range(4))
        rot = {x: list(r) for x, r in _K4_ROT.items()}
        base_name = "K4"
    elif base == "edge":
        g = complete_graph(range(2))
        rot = {x: list(r) for x, r in _EDGE_ROT.items()}
        base_name = "SingleEdge"
    else:
        raise ValueError(f"unknown base {base!r}")
    base_vertices = tuple(g.sorted_vertices())
    out = []
    for i in range(steps):
        w = g.v
        step, rot = random_step(g, rot if planar else None, rng, w)
        g = apply_step(g, step)
        out.append(step)
    return HennebergSequence(base_name, base_vertices, tuple(out)), g


def generate_corpus(count: int, vertices: int, seed: int = 0, base: str = "k4",
                    planar: bool = True):
    """``count`` (sequence, graph) pairs on ``vertices`` vertices; sub-seed ``seed ^ index``."""
    start = 4 if base == "k4" else 2
    if vertices < start:
        raise ValueError(f"base {base} already has {start} vertices")
    out = []
    for i in range(count):
        seq, g = random_sequence(vertices - start, base, seed ^ i, planar)
        cls = classify_sparsity(g)
        want = ("LamanPlusK", 1) if base == "k4" else ("Laman", 0)
        if (cls.tag, cls.k) != want:  # pragma: no cover - construction guarantees it
            raise AssertionError(f"corpus graph {i} classified {cls}")
        out.append((seq, g))
    return out
