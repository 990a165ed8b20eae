"""Search for a nice pseudo-tiling with eight pseudo-di-gons (e = 2v + 2).

Starting from the seed K4, repeat:
  * if some pseudo-di-gon admits a chord that keeps the tiling nice (a
    bitangent between reflex vertices of its two chains), add the one with
    the widest corner margin; each chord adds one di-gon;
  * otherwise split a random boundary edge of a random di-gon with a
    geometric H2 step whose third vertex lies on the tile across the edge,
    which puts a new vertex on the di-gon's chain.

Usage: python scripts/find_wide_fan.py [--seed 1] [--max-v 24] [-o fan.json]

Seed 1 produces tests/data/wide_fan.json (v=21, e=44, f2=8).
"""

import argparse
import itertools
import json
import random
import sys

from pointedfan.embed import EmbedderConfig, corner_margin, henneberg2_geometric, seed_k4
from pointedfan.errors import PointedFanError
from pointedfan.graph import edge_key
from pointedfan.tiling import classify_face, count_report, is_nice, tiling_from_geometry, tiling_to_json


def nice_chords(t):
    out = []
    for fi, cyc in enumerate(t.faces):
        if classify_face(t, fi).tag != "PseudoDiGon":
            continue
        for x, y in itertools.combinations(cyc, 2):
            if edge_key(x, y) in t.edges:
                continue
            for major in (False, True):
                edges = dict(t.edges)
                edges[edge_key(x, y)] = major
                try:
                    new = tiling_from_geometry(t.points, list(edges), [k for k, m in edges.items() if m])
                except (PointedFanError, ValueError):
                    continue
                if is_nice(new)[0]:
                    out.append(new)
    return out


def walk(seed, max_v, target=8):
    rnd = random.Random(seed)
    t = seed_k4()
    while t.v < max_v:
        chords = nice_chords(t)
        if chords:
            t = max(chords, key=corner_margin)
            if t.e - 2 * t.v + 6 >= target:
                return t
            continue
        digons = [fi for fi in range(t.f) if classify_face(t, fi).tag == "PseudoDiGon"]
        fi = rnd.choice(digons)
        cyc = t.faces[fi]
        i = rnd.randrange(len(cyc))
        a, b = cyc[i], cyc[(i + 1) % len(cyc)]
        # the di-gon is left of a -> b; the third vertex comes from the right tile
        across = t.dart_face[(b, a)]
        third = rnd.choice([x for x in t.faces[across] if x not in (a, b)])
        for _ in range(3):
            cfg = EmbedderConfig(rng_seed=rnd.randrange(10**6), max_samples_per_step=2000)
            try:
                t = henneberg2_geometric(t, (a, b), third, cfg, side="right")
                break
            except PointedFanError:
                pass
    return None


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--max-v", type=int, default=24)
    ap.add_argument("-o", "--out")
    args = ap.parse_args(argv)
    t = walk(args.seed, args.max_v)
    if t is None:
        print(f"seed {args.seed}: no fan within {args.max_v} vertices", file=sys.stderr)
        return 1
    print(count_report(t), f"margin={corner_margin(t):.3g}", file=sys.stderr)
    text = json.dumps(tiling_to_json(t), indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
