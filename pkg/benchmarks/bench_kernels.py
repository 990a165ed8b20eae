"""Compiled kernels against their pure-Python references.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5]

Times the pebble game on random Laman-plus-one graphs and the batched arc
crossing scan used by tiling validation, then an end-to-end classification
and tiling build in a subprocess with POINTEDFAN_PURE_PYTHON set and unset.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from pointedfan import kernels
from pointedfan.corpus import generate_corpus

END_TO_END = """
import time
from pointedfan.corpus import generate_corpus
from pointedfan.embed import EmbedderConfig, embed_laman_plus_one
from pointedfan.graph import classify_sparsity
from pointedfan.kernels import BACKEND
gs = [g for _, g in generate_corpus(20, 9, seed=3)]
t0 = time.perf_counter()
for i, g in enumerate(gs):
    classify_sparsity(g)
    embed_laman_plus_one(g, EmbedderConfig(rng_seed=i))
print(BACKEND, time.perf_counter() - t0)
"""


def pebble_inputs(v, count):
    out = []
    for _, g in generate_corpus(count, v, seed=11):
        order = g.sorted_vertices()
        index = {x: i for i, x in enumerate(order)}
        out.append((len(order), [(index[a], index[b]) for a, b in g.sorted_edges()]))
    return out


def arc_inputs(m, rng):
    p = rng.normal(size=(m, 3))
    q = rng.normal(size=(m, 3))
    p /= np.linalg.norm(p, axis=1)[:, None]
    q /= np.linalg.norm(q, axis=1)[:, None]
    # short arcs so that most scans run to the end without a hit
    q = p + 0.05 * q
    q /= np.linalg.norm(q, axis=1)[:, None]
    return p, q, np.zeros(m, dtype=np.uint8)


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if kernels._kernels is None:
        print("compiled extension not available; nothing to compare", file=sys.stderr)
        return 1
    rows = []
    for v in (20, 60, 150):
        graphs = pebble_inputs(v, 10)
        c = best(lambda: [kernels._kernels.pebble_game(n, e) for n, e in graphs], args.repeat)
        p = best(lambda: [kernels.py_pebble_game(n, e) for n, e in graphs], args.repeat)
        rows.append((f"pebble game, 10 graphs, v={v}", c, p))
    rng = np.random.default_rng(5)
    for m in (50, 500):
        s, e, mj = arc_inputs(m, rng)
        qs, qe, _ = arc_inputs(m, rng)
        def scan(fn):
            for i in range(m):
                fn(s[i + 1:], e[i + 1:], mj[i + 1:], qs[i], qe[i], False, 1e-12)
        c = best(lambda: scan(kernels._kernels.first_crossing), args.repeat)
        p = best(lambda: scan(kernels.py_first_crossing), args.repeat)
        rows.append((f"crossing scan, {m} arcs", c, p))
    width = max(len(r[0]) for r in rows)
    print(f"{'case':<{width}}  {'compiled s':>11}  {'python s':>10}  {'speedup':>8}")
    for name, c, p in rows:
        print(f"{name:<{width}}  {c:11.5f}  {p:10.5f}  {p / c:7.1f}x")
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("POINTEDFAN_PURE_PYTHON", None)
        if pure:
            env["POINTEDFAN_PURE_PYTHON"] = "1"
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, check=True,
                             capture_output=True, text=True).stdout.split()
        print(f"end to end (classify + embed, 20 graphs, v=9), {out[0]} backend: {float(out[1]):.2f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
