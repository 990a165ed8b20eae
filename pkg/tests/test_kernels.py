import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pointedfan import kernels
from pointedfan.kernels import py_first_crossing, py_pebble_game

compiled = pytest.mark.skipif(kernels._kernels is None, reason="extension not built")

edge_lists = st.integers(2, 9).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                 .filter(lambda e: e[0] != e[1]), max_size=30, unique_by=lambda e: frozenset(e)),
    )
)


def test_backend_name():
    assert kernels.BACKEND in ("compiled", "python")


@compiled
@settings(max_examples=300)
@given(edge_lists, st.sampled_from([(2, 3), (2, 2), (1, 1), (3, 6)]))
def test_pebble_game_agrees(case, kl):
    n, edges = case
    assert list(kernels._kernels.pebble_game(n, edges, *kl)) == list(py_pebble_game(n, edges, *kl))


def _random_arcs(rng, m):
    p = rng.normal(size=(m, 3))
    q = rng.normal(size=(m, 3))
    p /= np.linalg.norm(p, axis=1)[:, None]
    q /= np.linalg.norm(q, axis=1)[:, None]
    return p, q, rng.integers(0, 2, m).astype(np.uint8)


@compiled
def test_first_crossing_agrees():
    rng = np.random.default_rng(11)
    seen = set()
    for _ in range(400):
        s, e, mj = _random_arcs(rng, 6)
        qp, qq, qm = _random_arcs(rng, 1)
        args = (s, e, mj, qp[0], qq[0], bool(qm[0]), 1e-12)
        r = kernels._kernels.first_crossing(*args)
        assert r == py_first_crossing(*args)
        seen.add(min(r, 0))
    assert seen == {-1, 0}


@compiled
def test_first_crossing_degenerate_cases_agree():
    x, y, z = (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)
    mid = (2 ** -0.5, 2 ** -0.5, 0.0)
    cases = [
        ([x], [y], [0], mid, z, False),  # endpoint on an interior
        ([x], [y], [0], x, z, False),  # shared endpoint
        ([x], [y], [0], x, y, False),  # same arc
        ([x], [y], [0], x, (-1.0, 0.0, 0.0), False),  # antipodal query
    ]
    for s, e, mj, p, q, m in cases:
        args = (np.array(s), np.array(e), np.array(mj, dtype=np.uint8), p, q, m, 1e-12)
        assert kernels._kernels.first_crossing(*args) == py_first_crossing(*args)
