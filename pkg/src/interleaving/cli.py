"""Command-line entry point.

Exit codes: 0 on success, 2 on bad input, 3 when the exhaustive oracle would
exceed its search cap.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats
from .cloud import PointCloud, h0_barcode, jump_discontinuities
from .intervals import act_barcode, width
from .matching import bottleneck_distance
from .poset import maximal_translation
from .quiver import DEFAULT_CAP, CapExceeded, interleaving_distance_bruteforce, rep_from_barcode
from .refinement import (
    InvalidWitness,
    ShiftGuardExceeded,
    counterexample_from_irregularity,
    default_schedule,
    irregular_witnesses,
    is_regular,
    limit_experiment,
    shift_refinement,
    shifted_distance,
)

EXIT_INPUT = 2
EXIT_CAP = 3


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _poset(args):
    return formats.parse_poset(_read(args.poset))


def _pair(args):
    P = _poset(args)
    return P, formats.parse_barcode(_read(args.left), P), formats.parse_barcode(_read(args.right), P)


def cmd_dist(args) -> None:
    P, B1, B2 = _pair(args)
    d, _ = bottleneck_distance(P, B1, B2)
    print(formats.fmt(d))
    if args.exact_oracle:
        o = interleaving_distance_bruteforce(P, rep_from_barcode(P, B1, args.prime), rep_from_barcode(P, B2, args.prime), args.cap)
        print(f"oracle {formats.fmt(o)}")


def cmd_bottleneck(args) -> None:
    P, B1, B2 = _pair(args)
    d, m = bottleneck_distance(P, B1, B2)
    sys.stdout.write(formats.format_matching(P, B1, B2, m, d))


def cmd_width(args) -> None:
    P = _poset(args)
    for bar in formats.parse_barcode(_read(args.barcode), P):
        print(f"<{formats.fmt(P.points[bar.lo])},{formats.fmt(P.points[bar.hi])}> {formats.fmt(width(P, bar))}")


def cmd_act(args) -> None:
    P = _poset(args)
    bars = formats.parse_barcode(_read(args.barcode), P)
    lam = maximal_translation(P, formats.parse_number(args.eps))
    sys.stdout.write(formats.format_barcode(P, act_barcode(P, bars, lam)))


def cmd_shift(args) -> None:
    P = _poset(args)
    for x in shift_refinement(P.points, args.guard):
        print(formats.fmt(x))


def cmd_shifted_dist(args) -> None:
    P, B1, B2 = _pair(args)
    print(formats.fmt(shifted_distance(P, B1, B2)))


def cmd_regular(args) -> None:
    P = _poset(args)
    ok, w = is_regular(P)
    if ok:
        print("REGULAR")
        return
    i, l = w.one_based
    print(f"IRREGULAR at i={i} l={l}")
    if args.verbose:
        print(f"x_i={formats.fmt(P.points[w.i])} x_l={formats.fmt(P.points[w.l])} a={w.a} b={w.b} c={w.c}")


def cmd_counterexample(args) -> None:
    P = _poset(args)
    for w in irregular_witnesses(P):
        if not (w.a and w.b and w.c):
            continue
        try:
            ce = counterexample_from_irregularity(P, w, args.prime)
        except InvalidWitness:
            continue
        i, l = w.one_based
        print(f"WITNESS i={i} l={l} eps={formats.fmt(ce.eps)}")
        for name, bar in (("A", ce.A), ("C", ce.C), ("D", ce.D)):
            print(f"{name} <{formats.fmt(P.points[bar.lo])},{formats.fmt(P.points[bar.hi])}>")
        sys.stdout.write(formats.format_matching(P, ce.I.bars, ce.M.bars, ce.induced(P), ce.induced_height(P)))
        return
    print("NONE")


def cmd_limit(args) -> None:
    B1 = formats.parse_continuous(_read(args.left))
    B2 = formats.parse_continuous(_read(args.right))
    if args.base:
        base = [formats.parse_number(line.split("#", 1)[0]) for line in _read(args.base).splitlines() if line.split("#", 1)[0].strip()]
    else:
        base = sorted({e for bar in B1 + B2 for e in (bar.r, bar.R) if e is not None})
    b = formats.parse_number(args.b) if args.b else None
    report = limit_experiment(B1, B2, default_schedule(base, args.steps), b, args.guard)
    sys.stdout.write(formats.format_limit(report))


def _cloud(args) -> PointCloud:
    if args.metric == "sqeuclidean" and not args.squared_scale:
        raise ValueError("sqeuclidean reports squared scales; pass --squared-scale to accept that")
    return PointCloud(tuple(formats.parse_cloud(_read(args.cloud))), args.metric)


def cmd_h0(args) -> None:
    sys.stdout.write(formats.format_continuous(h0_barcode(_cloud(args))))


def cmd_jumps(args) -> None:
    for d in jump_discontinuities(_cloud(args)):
        print(formats.fmt(d))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="interleave", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def poset(p):
        p.add_argument("--poset", required=True, help="poset file ('-' for stdin)")

    def pair(p):
        poset(p)
        p.add_argument("--left", required=True)
        p.add_argument("--right", required=True)

    p = sub.add_parser("dist", help="bottleneck distance, optionally checked by the exhaustive oracle")
    pair(p)
    p.add_argument("--exact-oracle", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--prime", type=int, default=2)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("bottleneck", help="optimal matching report")
    pair(p)
    p.set_defaults(func=cmd_bottleneck)

    p = sub.add_parser("width", help="width of every bar")
    poset(p)
    p.add_argument("--barcode", required=True)
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("act", help="translate a barcode by the maximal translation of height eps")
    poset(p)
    p.add_argument("--barcode", required=True)
    p.add_argument("--eps", required=True)
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("shift", help="print the shift refinement")
    poset(p)
    p.add_argument("--guard", type=int, default=10_000)
    p.set_defaults(func=cmd_shift)

    p = sub.add_parser("shifted-dist", help="bottleneck distance after inflating to the shift refinement")
    pair(p)
    p.set_defaults(func=cmd_shifted_dist)

    p = sub.add_parser("regular", help="regularity check")
    poset(p)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_regular)

    p = sub.add_parser("counterexample", help="interleaving whose induced matching is too tall")
    poset(p)
    p.add_argument("--prime", type=int, default=2)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("limit", help="finite distances along a refinement chain")
    p.add_argument("--left", required=True, help="continuous barcode file")
    p.add_argument("--right", required=True)
    p.add_argument("--base", help="file with the base coordinates (default: all finite endpoints)")
    p.add_argument("--steps", type=int, default=4)
    p.add_argument("--b", help="suspension weight (default 2*diameter+1)")
    p.add_argument("--guard", type=int, default=10_000)
    p.set_defaults(func=cmd_limit)

    for name, fn, text in (("h0", cmd_h0, "degree-zero barcode of a point cloud"), ("jumps", cmd_jumps, "pairwise distance set")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--cloud", required=True, help="CSV point cloud")
        p.add_argument("--metric", choices=["linf", "l1", "sqeuclidean"], default="linf")
        p.add_argument("--squared-scale", action="store_true", help="required with sqeuclidean")
        p.set_defaults(func=fn)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CapExceeded as exc:
        print(f"error: oracle cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, KeyError, OSError, ShiftGuardExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
