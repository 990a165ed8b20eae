"""Combinatorial layer: sparsity classes, rigidity circuits, Henneberg moves.

Vertex ids are opaque but must be mutually sortable; every deterministic
choice below (edge order for the pebble game, reverse-move order) follows
sorted ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable

import networkx as nx

from .errors import InvalidStep, MalformedGraph, NotDecomposable
from .kernels import pebble_game

Vertex = Hashable
Edge = tuple


def edge_key(a, b) -> tuple:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Graph:
    vertices: frozenset
    edges: frozenset

    def __post_init__(self):
        for e in self.edges:
            if len(e) != 2:
                raise MalformedGraph(f"edge {e!r} is not a pair")
            a, b = e
            if a == b:
                raise MalformedGraph(f"loop at {a!r}")
            if a not in self.vertices or b not in self.vertices:
                raise MalformedGraph(f"edge {e!r} has an undeclared endpoint")
            if e != edge_key(a, b):
                raise MalformedGraph(f"edge {e!r} is not in sorted form")

    @classmethod
    def from_edges(cls, edges: Iterable, vertices: Iterable = ()) -> "Graph":
        """Build a graph, rejecting loops and repeated edges."""
        verts = set(vertices)
        keys = set()
        for e in edges:
            e = tuple(e)
            if len(e) != 2:
                raise MalformedGraph(f"edge {e!r} is not a pair")
            a, b = e
            if a == b:
                raise MalformedGraph(f"loop at {a!r}")
            key = edge_key(a, b)
            if key in keys:
                raise MalformedGraph(f"parallel edge {key!r}")
            keys.add(key)
            verts.update(key)
        return cls(frozenset(verts), frozenset(keys))

    @property
    def v(self) -> int:
        return len(self.vertices)

    @property
    def e(self) -> int:
        return len(self.edges)

    def sorted_vertices(self) -> list:
        return sorted(self.vertices)

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def neighbors(self, x) -> list:
        return sorted(b if a == x else a for a, b in self.edges if x in (a, b))

    def degree(self, x) -> int:
        return sum(1 for e in self.edges if x in e)

    def has_edge(self, a, b) -> bool:
        return edge_key(a, b) in self.edges

    def remove_vertex(self, x) -> "Graph":
        return Graph(self.vertices - {x}, frozenset(e for e in self.edges if x not in e))

    def remove_edges(self, edges: Iterable) -> "Graph":
        drop = {edge_key(*e) for e in edges}
        return Graph(self.vertices, self.edges - drop)

    def add_edge(self, a, b) -> "Graph":
        return Graph(self.vertices | {a, b}, self.edges | {edge_key(a, b)})

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.sorted_vertices())
        g.add_edges_from(self.sorted_edges())
        return g

    def relabel(self, mapping: dict) -> "Graph":
        return Graph.from_edges(
            ((mapping[a], mapping[b]) for a, b in self.edges),
            (mapping[x] for x in self.vertices),
        )


def complete_graph(labels: Iterable) -> Graph:
    labels = list(labels)
    return Graph.from_edges(
        ((a, b) for i, a in enumerate(labels) for b in labels[i + 1:]), labels
    )


# -- sparsity ---------------------------------------------------------------


def _pebble_run(g: Graph, k: int = 2, l: int = 3):
    order = g.sorted_vertices()
    index = {x: i for i, x in enumerate(order)}
    edges = g.sorted_edges()
    flags = pebble_game(len(order), [(index[a], index[b]) for a, b in edges], k, l)
    return edges, flags


def pebble_rank(g: Graph, k: int = 2, l: int = 3) -> int:
    _, flags = _pebble_run(g, k, l)
    return sum(flags)


def is_tight_sparse(g: Graph, k: int = 2, l: int = 3) -> bool:
    """True iff every vertex subset of size m >= 2 spans at most k*m - l edges.

    Decided by the pebble game: the graph is sparse exactly when the game
    accepts every edge. Tightness (``e == k*v - l``) is a separate check,
    see :func:`classify_sparsity`.
    """
    _, flags = _pebble_run(g, k, l)
    return all(flags)


@dataclass(frozen=True)
class SparsityClass:
    tag: str  # "Laman", "LamanPlusK", "Deficient", "Other"
    k: int = 0
    witness: tuple = ()

    def to_json(self) -> dict:
        out = {"class": self.tag}
        if self.tag == "LamanPlusK":
            out["k"] = self.k
            out["witness"] = [list(e) for e in self.witness]
        return out


def classify_sparsity(g: Graph) -> SparsityClass:
    if g.v < 2:
        return SparsityClass("Deficient")
    target = 2 * g.v - 3
    edges, flags = _pebble_run(g)
    rank = sum(flags)
    if g.e < target:
        return SparsityClass("Deficient")
    if g.e == target and rank == target:
        return SparsityClass("Laman")
    if rank == target:
        rejected = tuple(e for e, ok in zip(edges, flags) if not ok)
        return SparsityClass("LamanPlusK", k=g.e - target, witness=rejected)
    return SparsityClass("Other")


def is_laman(g: Graph) -> bool:
    return classify_sparsity(g).tag == "Laman"


def is_laman_plus_one(g: Graph) -> bool:
    c = classify_sparsity(g)
    return c.tag == "LamanPlusK" and c.k == 1


def is_rigidity_circuit(g: Graph) -> bool:
    # e = 2v - 2 and every proper subset sparse <=> every single-edge
    # deletion leaves a Laman graph
    if g.v < 2 or g.e != 2 * g.v - 2:
        return False
    if any(g.degree(x) == 0 for x in g.vertices):
        return False
    return all(is_tight_sparse(g.remove_edges([e])) for e in g.sorted_edges())


# -- Henneberg moves ----------------------------------------------------------


@dataclass(frozen=True)
class HennebergStep:
    kind: str  # "H1" or "H2"
    new_vertex: Vertex
    attach: tuple = ()
    split_edge: tuple = ()
    third: Vertex = None

    def __post_init__(self):
        if self.kind == "H1":
            if len(self.attach) != 2 or self.attach[0] == self.attach[1]:
                raise InvalidStep("H1 needs two distinct attach vertices")
        elif self.kind == "H2":
            if len(self.split_edge) != 2:
                raise InvalidStep("H2 needs a split edge")
            if self.third in self.split_edge or self.third is None:
                raise InvalidStep("H2 third vertex must differ from the split edge")
        else:
            raise InvalidStep(f"unknown step kind {self.kind!r}")

    @property
    def touched(self) -> tuple:
        """Old vertices joined to the new vertex."""
        if self.kind == "H1":
            return tuple(self.attach)
        return (*self.split_edge, self.third)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "new_vertex": self.new_vertex}
        if self.kind == "H1":
            out["attach"] = list(self.attach)
        else:
            out["split_edge"] = list(self.split_edge)
            out["third"] = self.third
        return out

    @classmethod
    def from_json(cls, d: dict) -> "HennebergStep":
        if d["kind"] == "H1":
            return cls("H1", d["new_vertex"], attach=tuple(d["attach"]))
        return cls("H2", d["new_vertex"], split_edge=tuple(d["split_edge"]), third=d["third"])


@dataclass(frozen=True)
class HennebergSequence:
    base: str  # "SingleEdge" or "K4"
    base_vertices: tuple
    steps: tuple = field(default_factory=tuple)

    def base_graph(self) -> Graph:
        if self.base == "SingleEdge":
            if len(self.base_vertices) != 2:
                raise InvalidStep("SingleEdge base needs two vertices")
        elif self.base == "K4":
            if len(self.base_vertices) != 4:
                raise InvalidStep("K4 base needs four vertices")
        else:
            raise InvalidStep(f"unknown base {self.base!r}")
        return complete_graph(self.base_vertices)

    def replay(self, upto: int | None = None) -> Graph:
        g = self.base_graph()
        for s in self.steps[:upto]:
            g = apply_step(g, s)
        return g

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "base_vertices": list(self.base_vertices),
            "steps": [s.to_json() for s in self.steps],
        }

    @classmethod
    def from_json(cls, d: dict) -> "HennebergSequence":
        return cls(
            d["base"],
            tuple(d["base_vertices"]),
            tuple(HennebergStep.from_json(s) for s in d["steps"]),
        )


def apply_step(g: Graph, s: HennebergStep) -> Graph:
    if s.new_vertex in g.vertices:
        raise InvalidStep(f"vertex {s.new_vertex!r} already present")
    for x in s.touched:
        if x not in g.vertices:
            raise InvalidStep(f"vertex {x!r} missing")
    w = s.new_vertex
    if s.kind == "H1":
        a, b = s.attach
        return Graph(g.vertices | {w}, g.edges | {edge_key(w, a), edge_key(w, b)})
    a, b = s.split_edge
    if not g.has_edge(a, b):
        raise InvalidStep(f"split edge {(a, b)!r} missing")
    new = {edge_key(w, a), edge_key(w, b), edge_key(w, s.third)}
    return Graph(g.vertices | {w}, (g.edges - {edge_key(a, b)}) | new)


def _reverse_moves(g: Graph, in_class):
    """Candidate inverse Henneberg moves: all H1 undos first, then H2 undos."""
    order = g.sorted_vertices()
    for w in order:
        nbrs = g.neighbors(w)
        if len(nbrs) == 2:
            yield HennebergStep("H1", w, attach=tuple(nbrs)), g.remove_vertex(w)
    for w in order:
        nbrs = g.neighbors(w)
        if len(nbrs) != 3:
            continue
        rest = g.remove_vertex(w)
        for i in range(3):
            for j in range(i + 1, 3):
                a, b = nbrs[i], nbrs[j]
                if rest.has_edge(a, b):
                    continue
                third = next(x for x in nbrs if x not in (a, b))
                smaller = rest.add_edge(a, b)
                if in_class(smaller):
                    yield HennebergStep("H2", w, split_edge=(a, b), third=third), smaller


def henneberg_decompose(g: Graph) -> HennebergSequence:
    """Reverse search for a Henneberg sequence producing ``g``.

    Laman graphs reduce to a single edge, Laman-plus-one graphs to K4.
    Inverse moves that leave the class are never taken; dead ends are
    backtracked depth-first.
    """
    cls = classify_sparsity(g)
    if cls.tag == "Laman":
        base, base_size, in_class = "SingleEdge", 2, is_laman
    elif cls.tag == "LamanPlusK" and cls.k == 1:
        base, base_size, in_class = "K4", 4, is_laman_plus_one
    else:
        raise NotDecomposable(f"graph is {cls.tag} (k={cls.k}); need Laman or Laman-plus-one")

    dead = set()

    def search(h: Graph):
        if h.v == base_size:
            return []
        if (h.vertices, h.edges) in dead:
            return None
        for step, smaller in _reverse_moves(h, in_class):
            rest = search(smaller)
            if rest is not None:
                rest.append(step)
                return rest
        dead.add((h.vertices, h.edges))
        return None

    steps = search(g)
    if steps is None:
        raise NotDecomposable("reverse search exhausted all inverse moves")
    base_graph = g
    for s in reversed(steps):
        base_graph = base_graph.remove_vertex(s.new_vertex)
        if s.kind == "H2":
            base_graph = base_graph.add_edge(*s.split_edge)
    return HennebergSequence(base, tuple(base_graph.sorted_vertices()), tuple(steps))


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.v != h.v or g.e != h.e:
        return False
    return nx.is_isomorphic(g.to_networkx(), h.to_networkx())


# -- JSON -----------------------------------------------------------------------


def graph_to_json(g: Graph) -> dict:
    return {"vertices": g.sorted_vertices(), "edges": [list(e) for e in g.sorted_edges()]}


def graph_from_json(d: dict) -> Graph:
    try:
        verts = d["vertices"]
        edges = d["edges"]
    except (KeyError, TypeError) as exc:
        raise MalformedGraph(f"graph JSON lacks {exc}") from None
    if not isinstance(verts, list) or not isinstance(edges, list):
        raise MalformedGraph("vertices and edges must be lists")
    if len(set(verts)) != len(verts):
        raise MalformedGraph("repeated vertex id")
    declared = set(verts)
    for e in edges:
        if not isinstance(e, list) or any(x not in declared for x in e):
            raise MalformedGraph(f"edge {e!r} has an undeclared endpoint")
    return Graph.from_edges((tuple(e) for e in edges), verts)
