import math

import pytest

from oracles import search_nice_k4
from pointedfan.corpus import generate_corpus
from pointedfan.embed import (
    _SEED_POINTS,
    EmbedderConfig,
    EmbedTrace,
    embed_laman_plus_one,
    henneberg1_geometric,
    henneberg2_geometric,
    seed_k4,
)
from pointedfan.errors import (
    DegenerateConfiguration,
    FeasibleRegionExhausted,
    InvalidStep,
    NonPlanarGraph,
    NotLamanPlusOne,
)
from pointedfan.graph import (
    Graph,
    HennebergStep,
    apply_step,
    complete_graph,
    is_isomorphic,
    is_laman_plus_one,
)
from pointedfan.sphere import Arc
from pointedfan.tiling import (
    build_tiling,
    classify_face,
    count_report,
    digon_count,
    is_nice,
    is_pointed,
    tiling_to_json,
)


def nice_counts(t):
    ok, why = is_nice(t)
    assert ok, why
    cr = count_report(t)
    assert cr.residuals_zero
    assert cr.f3 == t.v - 4 and cr.f2 == t.e - 2 * t.v + 6
    return cr


def test_config_validation():
    with pytest.raises(ValueError):
        EmbedderConfig(max_samples_per_step=0)
    with pytest.raises(ValueError):
        EmbedderConfig(perturbation_radius=0.1)
    with pytest.raises(ValueError):
        EmbedderConfig(perturbation_radius=0.0)


def test_seed_is_nice_with_four_digons():
    t = seed_k4()
    cr = nice_counts(t)
    assert (cr.f2, cr.f3) == (4, 0)
    assert all(len(f) == 3 for f in t.faces)


def test_seed_fixture_reproduced_by_search_oracle():
    best = search_nice_k4()
    assert best is not None
    score, pts = best
    assert pts == _SEED_POINTS
    assert score == pytest.approx(0.8376, abs=1e-4)


@pytest.mark.parametrize("fi", range(4))
def test_h1_into_every_seed_face(fi):
    t = seed_k4()
    cyc = t.faces[fi]
    for i in range(3):
        u, v = cyc[i], cyc[(i + 1) % 3]
        new = henneberg1_geometric(t, fi, u, v, EmbedderConfig(rng_seed=fi))
        cr = nice_counts(new)
        assert (cr.v, cr.e, cr.f2, cr.f3) == (5, 8, 4, 1)
        # old vertices do not move
        assert all(new.points[x] == t.points[x] for x in t.order)


def test_h2_on_every_seed_edge():
    t = seed_k4()
    for a, b in t.sorted_edges():
        for side in ("left", "right"):
            fi = t.dart_face[(a, b) if side == "left" else (b, a)]
            third = next(x for x in t.faces[fi] if x not in (a, b))
            new = henneberg2_geometric(t, (a, b), third, EmbedderConfig(), side=side)
            cr = nice_counts(new)
            assert (cr.v, cr.e, cr.f2, cr.f3) == (5, 8, 4, 1)
            assert (min(a, b), max(a, b)) not in new.edges
            assert all(new.points[x] == t.points[x] for x in t.order)


def test_step_argument_validation():
    t = seed_k4()
    with pytest.raises(InvalidStep):
        henneberg1_geometric(t, 0, 0, 0, EmbedderConfig())
    with pytest.raises(InvalidStep):
        henneberg2_geometric(t, (0, 1), 0, EmbedderConfig())


def test_tiny_budget_exhausts():
    t = seed_k4()
    with pytest.raises(FeasibleRegionExhausted):
        henneberg1_geometric(t, 0, t.faces[0][0], t.faces[0][1], EmbedderConfig(max_samples_per_step=1))


def test_vertex_on_the_old_arc_is_flat():
    # subdivide (0, 1) at its midpoint: both corners at the new vertex are flat
    t = seed_k4()
    arc = t.arc(0, 1)
    pts = dict(t.points)
    pts[4] = arc.point_at(arc.length / 2)
    edges = [k for k in t.edges if k != (0, 1)] + [(0, 4), (1, 4)]
    faces = [(0, 4, 1, 2), (0, 2, 3), (0, 3, 1, 4), (1, 3, 2)]
    sub = build_tiling(pts, edges, faces, long_arcs=[k for k, m in t.edges.items() if m])
    with pytest.raises(DegenerateConfiguration, match="flat"):
        is_pointed(sub)
    with pytest.raises(DegenerateConfiguration, match="flat"):
        classify_face(sub, 0)


def test_k4_embeds_as_seed():
    t = embed_laman_plus_one(complete_graph(range(4)))
    s = seed_k4()
    assert tiling_to_json(t) == tiling_to_json(s)


def test_k4_h1_h2():
    g = complete_graph(range(4))
    g = apply_step(g, HennebergStep("H1", 4, attach=(0, 1)))
    g = apply_step(g, HennebergStep("H2", 5, split_edge=(2, 3), third=0))
    assert (g.v, g.e) == (6, 10)
    t = embed_laman_plus_one(g)
    cr = nice_counts(t)
    assert (cr.f2, cr.f3) == (4, 2)
    assert is_isomorphic(t.graph(), g)


def test_rejects_wrong_class():
    with pytest.raises(NotLamanPlusOne):
        embed_laman_plus_one(complete_graph(range(3)))
    with pytest.raises(NotLamanPlusOne):
        embed_laman_plus_one(complete_graph(range(5)))


def test_rejects_nonplanar():
    # K_{3,3} plus one edge: Laman-plus-one, not planar
    g = Graph.from_edges([(a, b) for a in range(3) for b in range(3, 6)] + [(0, 1)])
    assert is_laman_plus_one(g)
    with pytest.raises(NonPlanarGraph):
        embed_laman_plus_one(g)


def test_deterministic_per_seed():
    _, g = generate_corpus(1, 9, seed=21)[0]
    a = embed_laman_plus_one(g, EmbedderConfig(rng_seed=5))
    b = embed_laman_plus_one(g, EmbedderConfig(rng_seed=5))
    assert tiling_to_json(a) == tiling_to_json(b)
    c = embed_laman_plus_one(g, EmbedderConfig(rng_seed=6))
    assert tiling_to_json(c) != tiling_to_json(a)


def test_corpus_embeddings_and_replay_locality():
    for i, (_, g) in enumerate(generate_corpus(12, 9, seed=40)):
        trace = EmbedTrace()
        t = embed_laman_plus_one(g, EmbedderConfig(rng_seed=i), trace)
        nice_counts(t)
        assert digon_count(t) == 4
        assert is_isomorphic(t.graph(), g)
        assert trace.backtracks <= 3
        assert trace.sequence.replay() == g or is_isomorphic(trace.sequence.replay(), g)


def test_major_arcs_are_marked_in_json():
    d = tiling_to_json(seed_k4())
    assert sorted(map(tuple, d["long_arcs"])) == [(0, 3), (1, 2)]
    for a, b in d["long_arcs"]:
        assert Arc(tuple(d["vertices"][a]["xyz"]), tuple(d["vertices"][b]["xyz"]), True).length > math.pi


def test_last_backtrack_rerolls_everything():
    # this corpus graph exhausts an H1 step three times in a row; only the
    # final full re-roll reaches a geometry where it fits
    g = generate_corpus(4, 9, seed=3)[3][1]
    trace = EmbedTrace()
    t = embed_laman_plus_one(g, EmbedderConfig(rng_seed=3), trace)
    assert trace.backtracks == 3
    nice_counts(t)
    assert is_isomorphic(t.graph(), g)
