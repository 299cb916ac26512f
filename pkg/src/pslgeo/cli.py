"""Command-line interface.

Matrices are read from JSON files (or inline JSON) in the big-int-safe
format {"dim": d, "entries": [["-12", "5"], ...]} with entries as decimal
strings; plain integers are accepted too.  Exit status 0 means every
internal assertion of the invoked command passed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .exactmat import ExactMatrix, GeneratorSet, log_operator_norm, psl_canonicalize
from .hyperbolic import convert, point_from_json, point_to_json
from .spd import SpdPoint, base_point, geometric_distance
from .tessellation import geodesic_tile_sequence, svg_emit, tile_sequence_for, tiles_to_depth, word_from_tiles
from .words import bfs_word_length, short_word


def _load_json(arg: str):
    if os.path.exists(arg):
        with open(arg) as fh:
            return json.load(fh)
    return json.loads(arg)


def _load_matrix(arg: str) -> ExactMatrix:
    return ExactMatrix.from_json(_load_json(arg))


def _cmd_convert(args):
    coords = _load_json(args.point)
    if isinstance(coords, dict):
        point = point_from_json(coords)
    else:
        point = coords
    out = convert(point, args.source, args.target)
    print(json.dumps(point_to_json(out)))
    return 0


def _cmd_dr(args):
    gamma = psl_canonicalize(_load_matrix(args.gamma))
    if args.base:
        base = SpdPoint.from_json(_load_json(args.base))
    else:
        base = base_point(gamma.dim)
    one = psl_canonicalize(ExactMatrix.identity(gamma.dim))
    print(json.dumps({"geometric_distance": geometric_distance(one, gamma, base)}))
    return 0


def _cmd_tessellate_svg(args):
    tiles = tiles_to_depth(args.depth)
    text = svg_emit(args.re_min, args.re_max, im_max=args.im_max, tiles=tiles)
    with open(args.out, "w") as fh:
        fh.write(text)
    print(f"wrote {args.out} ({len(tiles)} tiles)")
    return 0


def _cmd_trace(args):
    gamma = _load_matrix(args.gamma)
    if gamma.dim != 2:
        raise SystemExit("trace needs a 2x2 matrix")
    tiles = tile_sequence_for(gamma)
    word = word_from_tiles(tiles)
    gens = GeneratorSet.sigma(2)
    assert word.psl_evaluate(gens) == psl_canonicalize(gamma)
    print(json.dumps({
        "tiles": [[[str(v) for v in row] for row in t.label.rep.entries] for t in tiles],
        "word": word.to_json(gens),
    }))
    return 0


def _cmd_word_length(args):
    gamma = psl_canonicalize(_load_matrix(args.gamma))
    gens = GeneratorSet.sigma(2 if args.gens == "sigma2" else 3)
    if gens.dim != gamma.dim:
        raise SystemExit(f"matrix is {gamma.dim}x{gamma.dim} but generators are for dimension {gens.dim}")
    length = bfs_word_length(gamma, gens, args.max_radius)
    print(json.dumps({"length": length, "exceeded": length is None}))
    return 0


def _cmd_short_word(args):
    gamma = _load_matrix(args.gamma)
    gens = GeneratorSet.sigma(gamma.dim)
    word = short_word(gamma, gens)
    assert word.evaluate(gens) == gamma
    log_norm = log_operator_norm(gamma) if not gamma.is_identity() else 0.0
    norm = math.exp(log_norm) if log_norm < 700 else None
    out = word.to_json(gens)
    out["norm"] = norm
    out["log_norm"] = log_norm
    out["ratio"] = len(word) / max(math.log(2.0), log_norm)
    print(json.dumps(out))
    return 0


def _cmd_experiment(args):
    from .experiments import experiment_d2, experiment_d3, experiment_lattice

    if args.which == "d2":
        report = experiment_d2(args.n_max)
    elif args.which == "d3":
        report = experiment_d3(args.trials, args.gen_len, args.seed)
    else:
        report = experiment_lattice(args.k_max)
    if args.out:
        report.write_csv(args.out)
        print(json.dumps({"written": args.out, "summary": report.summary}))
    else:
        print(json.dumps(report.to_json()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pslgeo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert a point between the models H, D, B, U")
    p.add_argument("--from", dest="source", required=True, choices="HDBU")
    p.add_argument("--to", dest="target", required=True, choices="HDBU")
    p.add_argument("--point", required=True, help="JSON coordinates, e.g. '[0, 2]'")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("dr", help="geometric distance from the identity to a group element")
    p.add_argument("--gamma", required=True, help="matrix JSON (file or inline)")
    p.add_argument("--base", help="base point JSON (file or inline)")
    p.set_defaults(func=_cmd_dr)

    p = sub.add_parser("tessellate-svg", help="render the tessellation as SVG")
    p.add_argument("--re-min", type=float, default=-2.0)
    p.add_argument("--re-max", type=float, default=2.0)
    p.add_argument("--im-max", type=float, default=2.2)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_tessellate_svg)

    p = sub.add_parser("trace", help="tile chain and word for a 2x2 group element")
    p.add_argument("--gamma", required=True)
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("word-length", help="exact word length by breadth-first search")
    p.add_argument("--gamma", required=True)
    p.add_argument("--gens", choices=("sigma2", "sigma3"), default="sigma2")
    p.add_argument("--max-radius", type=int, default=12)
    p.set_defaults(func=_cmd_word_length)

    p = sub.add_parser("short-word", help="logarithmic-length word for a matrix, d >= 3")
    p.add_argument("--gamma", required=True)
    p.set_defaults(func=_cmd_short_word)

    p = sub.add_parser("experiment", help="run a comparison experiment")
    which = p.add_subparsers(dest="which", required=True)
    d2 = which.add_parser("d2")
    d2.add_argument("--n-max", type=int, default=10_000)
    d2.add_argument("--out")
    d2.set_defaults(func=_cmd_experiment)
    d3 = which.add_parser("d3")
    d3.add_argument("--trials", type=int, default=20)
    d3.add_argument("--gen-len", type=int, default=40)
    d3.add_argument("--seed", type=int, default=0)
    d3.add_argument("--out")
    d3.set_defaults(func=_cmd_experiment)
    lattice = which.add_parser("lattice")
    lattice.add_argument("--k-max", type=int, default=100)
    lattice.add_argument("--out")
    lattice.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
