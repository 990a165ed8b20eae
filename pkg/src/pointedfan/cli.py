"""pointedfan command line.

Exit codes: 0 ok, 2 malformed input, 3 class mismatch, 4 embedding failure,
5 verification failure, 6 stress dimension mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

from . import __version__
from .corpus import generate_corpus
from .embed import EmbedderConfig, EmbedTrace, embed_laman_plus_one
from .errors import (
    CrossingEdges,
    DegenerateConfiguration,
    EmbeddingFailed,
    LiftInconsistent,
    MalformedGraph,
    NonPlanarGraph,
    NonSphericalComplex,
    NotASelfStress,
    NotDecomposable,
    NotLamanPlusOne,
)
from .graph import classify_sparsity, graph_from_json, graph_to_json, henneberg_decompose
from .render import RenderSpec, render_svg
from .stress import (
    horn_count,
    is_hyperbolic_certificate,
    lift,
    polytope_to_json,
    reciprocal_surface,
    self_stress_basis,
    survey_csv,
    survey_rows,
)
from .tiling import count_report, digon_count, is_nice, tiling_from_json, tiling_to_json

EXIT_OK = 0
EXIT_MALFORMED = 2
EXIT_CLASS = 3
EXIT_EMBED = 4
EXIT_VERIFY = 5
EXIT_STRESS = 6

log = logging.getLogger("pointedfan")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def dumps(obj) -> str:
    # repr floats: shortest string that reads back to the same double
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _read_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_MALFORMED) from None


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def load_graph(path):
    try:
        g = graph_from_json(_read_json(path))
    except (MalformedGraph, TypeError) as exc:
        raise CliError(f"malformed graph: {exc}", EXIT_MALFORMED) from None
    if g.v < 2:
        raise CliError("graph needs at least two vertices", EXIT_MALFORMED)
    return g


def load_tiling(path):
    try:
        return tiling_from_json(_read_json(path))
    except (NonSphericalComplex, DegenerateConfiguration, CrossingEdges, TypeError, ValueError) as exc:
        raise CliError(f"malformed tiling ({type(exc).__name__}): {exc}", EXIT_MALFORMED) from None


# -- subcommands -------------------------------------------------------------


def cmd_analyze(args):
    g = load_graph(args.graph)
    cls = classify_sparsity(g)
    out = cls.to_json()
    out["vertices"] = g.v
    out["edges"] = g.e
    seq = None
    if cls.tag == "Laman" or (cls.tag == "LamanPlusK" and cls.k == 1):
        try:
            seq = henneberg_decompose(g).to_json()
        except NotDecomposable as exc:
            raise CliError(str(exc), EXIT_CLASS) from None
    out["henneberg"] = seq
    _write(args.out, dumps(out))
    return EXIT_OK


def cmd_embed(args):
    g = load_graph(args.graph)
    try:
        cfg = EmbedderConfig(args.seed, args.max_samples, args.perturbation)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_MALFORMED) from None
    trace = EmbedTrace()
    try:
        t = embed_laman_plus_one(g, cfg, trace)
    except (NotLamanPlusOne, NonPlanarGraph) as exc:
        raise CliError(f"{type(exc).__name__}: {exc}", EXIT_CLASS) from None
    except EmbeddingFailed as exc:
        raise CliError(f"embedding failed at step {exc.step}: {exc}", EXIT_EMBED) from None
    out = tiling_to_json(t)
    out["metadata"] = {
        "generator": f"pointedfan {__version__}",
        "seed": cfg.rng_seed,
        "max_samples": cfg.max_samples_per_step,
        "perturbation": cfg.perturbation_radius,
        "backtracks": trace.backtracks,
        "henneberg": trace.sequence.to_json(),
    }
    _write(args.out, dumps(out))
    return EXIT_OK


def verification_report(t) -> dict:
    g = t.graph()
    cls = classify_sparsity(g)
    try:
        seq_len = len(henneberg_decompose(g).steps)
    except NotDecomposable:
        seq_len = None
    nice, why = is_nice(t)
    counts = count_report(t).to_json() if nice else None
    dev = 0.0
    for x, corners in t.vertex_corners().items():
        dev = max(dev, abs(sum(a for _, a in corners) - 2 * math.pi))
    basis = self_stress_basis(t)
    closure = cert = horns = None
    if len(basis) == 1:
        try:
            vp = lift(t, basis[0])
        except (NotASelfStress, LiftInconsistent):
            pass
        else:
            closure = vp.closure_residual
            cert = is_hyperbolic_certificate(vp)
            horns = horn_count(vp) if nice else None
    return {
        "graph_class": cls.to_json(),
        "henneberg_length": seq_len,
        "counts": counts,
        "nice": nice,
        "nice_witness": None if nice else why,
        "digon_count": digon_count(t),
        "stress_dimension": len(basis),
        "closure_residual": closure,
        "certificate": cert,
        "horn_count": horns,
        "max_angle_sum_deviation": dev,
    }


def _report_ok(report, require_nice):
    if require_nice and not report["nice"]:
        return False
    counts = report["counts"]
    if counts is not None:
        keys = ("euler_residual", "corner_residual_a", "corner_residual_b")
        if any(counts[k] != 0 for k in keys):
            return False
    return True


def cmd_verify(args):
    t = load_tiling(args.tiling)
    report = verification_report(t)
    _write(args.out, dumps(report))
    return EXIT_OK if _report_ok(report, args.require_nice) else EXIT_VERIFY


def cmd_lift(args):
    t = load_tiling(args.tiling)
    if not 0 <= args.root < t.f:
        raise CliError(f"--root {args.root} is not a face index (0..{t.f - 1})", EXIT_MALFORMED)
    basis = self_stress_basis(t)
    if args.stress_index is None:
        if len(basis) != 1:
            raise CliError(f"stress space has dimension {len(basis)}; pass --stress-index", EXIT_STRESS)
        s = basis[0]
    else:
        if not 0 <= args.stress_index < len(basis):
            raise CliError(f"--stress-index {args.stress_index} outside basis of size {len(basis)}",
                           EXIT_STRESS)
        s = basis[args.stress_index]
    try:
        vp = lift(t, s, root=args.root, order=args.order)
    except (NotASelfStress, LiftInconsistent) as exc:
        raise CliError(str(exc), EXIT_VERIFY) from None
    out = polytope_to_json(vp)
    out["stress_dimension"] = len(basis)
    out["stress_index"] = 0 if args.stress_index is None else args.stress_index
    _write(args.out, dumps(out))
    if args.obj:
        _write(args.obj, reciprocal_surface(vp).to_obj())
    return EXIT_OK


def _load_colors(path):
    d = _read_json(path)
    try:
        return {(min(a, b), max(a, b)): c for a, b, c in d["colors"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"malformed colors file: {exc}", EXIT_MALFORMED) from None


def cmd_render(args):
    t = load_tiling(args.tiling)
    try:
        spec = RenderSpec(args.projection, args.samples, args.highlight)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_MALFORMED) from None
    colors = _load_colors(args.colors) if args.colors else None
    if colors is not None and args.highlight != "colors":
        log.warning("--colors is only used with --highlight colors")
    _write(args.out, render_svg(t, spec, colors))
    return EXIT_OK


def cmd_corpus(args):
    try:
        entries = generate_corpus(args.count, args.vertices, args.seed, args.base,
                                  planar=not args.nonplanar)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_MALFORMED) from None
    os.makedirs(args.out, exist_ok=True)
    width = max(4, len(str(args.count - 1)))
    for i, (seq, g) in enumerate(entries):
        out = graph_to_json(g)
        out["metadata"] = {
            "seed": args.seed,
            "sub_seed": args.seed ^ i,
            "base": args.base,
            "planar": not args.nonplanar,
            "class": classify_sparsity(g).to_json(),
            "henneberg": seq.to_json(),
        }
        _write(os.path.join(args.out, f"graph_{i:0{width}d}.json"), dumps(out))
    return EXIT_OK


def cmd_survey(args):
    rows = []
    paths = []
    for p in args.tilings:
        if os.path.isdir(p):
            paths.extend(os.path.join(p, n) for n in sorted(os.listdir(p)) if n.endswith(".json"))
        else:
            paths.append(p)
    skipped = 0
    for p in paths:
        t = load_tiling(p)
        basis = self_stress_basis(t)
        if len(basis) != 1:
            log.warning("%s: stress dimension %d, skipped", p, len(basis))
            skipped += 1
            continue
        rows.extend(survey_rows(lift(t, basis[0]), source=os.path.basename(p)))
    _write(args.out, survey_csv(rows))
    return EXIT_STRESS if skipped and args.strict else EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pointedfan", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify a graph and find a Henneberg sequence")
    p.add_argument("graph")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("embed", help="nice pseudo-tiling of a Laman-plus-one graph")
    p.add_argument("graph")
    p.add_argument("--seed", type=int, default=0, help="random seed for vertex placement")
    p.add_argument("--max-samples", type=int, default=EmbedderConfig.max_samples_per_step,
                   help="candidate positions tried per Henneberg step")
    p.add_argument("--perturbation", type=float, default=EmbedderConfig.perturbation_radius,
                   help="jitter radius (rad) for retrying a degenerate candidate")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("verify", help="check a tiling and report its invariants")
    p.add_argument("tiling")
    p.add_argument("--require-nice", action="store_true")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lift", help="lift the self-stress of a tiling to a virtual polytope")
    p.add_argument("tiling")
    p.add_argument("--stress-index", type=int)
    p.add_argument("--root", type=int, default=0, help="face whose linear functional is zero")
    p.add_argument("--order", choices=("bfs", "dfs"), default="bfs")
    p.add_argument("--obj", help="write the reciprocal surface as OBJ")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("render", help="SVG drawing under stereographic projection")
    p.add_argument("tiling")
    p.add_argument("--projection", choices=("north", "south", "both"), default="both")
    p.add_argument("--samples", type=int, default=32, help="points per arc (>= 8)")
    p.add_argument("--highlight", choices=("digons", "colors", "none"), default="digons")
    p.add_argument("--colors", help="lift JSON whose edge colors are drawn")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("corpus", help="random graphs from forward Henneberg steps")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--vertices", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--base", choices=("edge", "k4"), default="k4")
    p.add_argument("--nonplanar", action="store_true", help="attach vertices anywhere")
    p.add_argument("-o", "--out", default="corpus")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("survey", help="CSV of edge colors and reflex corners over tilings")
    p.add_argument("tilings", nargs="+", help="tiling files or directories")
    p.add_argument("--strict", action="store_true", help="exit 6 if any tiling was skipped")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_survey)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"pointedfan {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
