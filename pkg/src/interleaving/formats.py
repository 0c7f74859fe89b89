"""Plain-text formats for posets, barcodes, matchings and reports.

Every reader skips blank lines and ``#`` comments and raises
:class:`ParseError` with the offending line number.  Numbers are exact
decimals or ``p/q`` fractions.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Iterable, Sequence

from .intervals import Interval, width
from .matching import MatchingRecord, pair_cost
from .poset import WeightedPoset
from .refinement import ContinuousBar, LimitReport

__all__ = [
    "ParseError",
    "fmt",
    "parse_number",
    "parse_poset",
    "format_poset",
    "parse_barcode",
    "format_barcode",
    "parse_continuous",
    "format_continuous",
    "format_matching",
    "format_limit",
    "parse_cloud",
]


class ParseError(ValueError):
    pass


def fmt(q) -> str:
    """Exact decimal when the denominator allows it, ``p/q`` otherwise."""
    q = Fraction(q)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    if q.denominator == 1:
        return str(q.numerator)
    digits = max(twos, fives)
    scaled = abs(q) * 10**digits
    sign = "-" if q < 0 else ""
    s = str(int(scaled)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def parse_number(tok: str) -> Fraction:
    try:
        return Fraction(tok.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not an exact number: {tok!r}") from exc


def _lines(text: str):
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield k, line


def parse_poset(text: str) -> WeightedPoset:
    """``b <weight>`` once, then one coordinate per line in increasing order."""
    b = None
    pts = []
    for k, line in _lines(text):
        toks = line.split()
        if toks[0] == "b":
            if len(toks) != 2 or b is not None:
                raise ParseError(f"line {k}: expected a single 'b <weight>' line")
            b = parse_number(toks[1])
            continue
        if len(toks) != 1:
            raise ParseError(f"line {k}: expected one coordinate")
        try:
            pts.append(parse_number(toks[0]))
        except ParseError as exc:
            raise ParseError(f"line {k}: {exc}") from None
    try:
        return WeightedPoset(tuple(pts), b)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_poset(P: WeightedPoset) -> str:
    return "\n".join([f"b {fmt(P.b)}"] + [fmt(x) for x in P.points]) + "\n"


def parse_barcode(text: str, P: WeightedPoset) -> tuple[Interval, ...]:
    """``lo hi [mult]`` per line, endpoints given as coordinates of ``P``."""
    out = []
    for k, line in _lines(text):
        toks = line.split()
        if len(toks) not in (2, 3):
            raise ParseError(f"line {k}: expected 'lo hi [mult]'")
        try:
            lo, hi = (parse_number(t) for t in toks[:2])
            mult = int(toks[2]) if len(toks) == 3 else 1
            bar = Interval.from_coords(P, lo, hi)
        except (KeyError, ValueError) as exc:
            raise ParseError(f"line {k}: {exc}") from None
        if mult < 1:
            raise ParseError(f"line {k}: multiplicity must be positive")
        out.extend([bar] * mult)
    return tuple(sorted(out))


def format_barcode(P: WeightedPoset, bars: Iterable[Interval]) -> str:
    counts = Counter(bars)
    lines = [f"{fmt(P.points[b.lo])} {fmt(P.points[b.hi])} {m}" for b, m in sorted(counts.items())]
    return "".join(line + "\n" for line in lines)


def parse_continuous(text: str) -> tuple[ContinuousBar, ...]:
    """``r R|inf [mult]`` per line for half-open bars ``[r, R)``."""
    out = []
    for k, line in _lines(text):
        toks = line.split()
        if len(toks) not in (2, 3):
            raise ParseError(f"line {k}: expected 'r R|inf [mult]'")
        try:
            r = parse_number(toks[0])
            R = None if toks[1].lower() in {"inf", "infinity"} else parse_number(toks[1])
            mult = int(toks[2]) if len(toks) == 3 else 1
            out.append(ContinuousBar(r, R, mult))
        except ValueError as exc:
            raise ParseError(f"line {k}: {exc}") from None
    return tuple(sorted(out, key=lambda c: (c.r, c.R is None, c.R or 0)))


def format_continuous(bars: Iterable[ContinuousBar]) -> str:
    merged: Counter = Counter()
    for bar in bars:
        merged[(bar.r, bar.R)] += bar.mult
    keyed = sorted(merged.items(), key=lambda kv: (kv[0][0], kv[0][1] is None, kv[0][1] or 0))
    return "".join(f"{fmt(r)} {'inf' if R is None else fmt(R)} {m}\n" for (r, R), m in keyed)


def _bar(P: WeightedPoset, bar: Interval) -> str:
    return f"<{fmt(P.points[bar.lo])},{fmt(P.points[bar.hi])}>"


def format_matching(
    P: WeightedPoset, B1: Sequence[Interval], B2: Sequence[Interval], m: MatchingRecord, height
) -> str:
    lines = [f"MATCH {_bar(P, B1[i])} {_bar(P, B2[j])} dist={fmt(pair_cost(P, B1[i], B2[j]))}" for i, j in m.pairs]
    lines += [f"UNMATCHED-LEFT {_bar(P, B1[i])} width={fmt(width(P, B1[i]))}" for i in m.unmatched_left]
    lines += [f"UNMATCHED-RIGHT {_bar(P, B2[j])} width={fmt(width(P, B2[j]))}" for j in m.unmatched_right]
    lines.append(f"HEIGHT {fmt(height)}")
    return "\n".join(lines) + "\n"


def format_limit(report: LimitReport) -> str:
    lines = ["step\t|X|\tmesh\tlower\tupper\tclassical"]
    for r in report.rows:
        lines.append("\t".join([str(r.step), str(r.size), fmt(r.mesh), fmt(r.lower), fmt(r.upper), fmt(r.classical)]))
    for bar in report.excluded:
        lines.append(f"# excluded infinite bar [{fmt(bar.r)}, inf) x{bar.mult}")
    return "\n".join(lines) + "\n"


def parse_cloud(text: str) -> list[tuple[Fraction, ...]]:
    """One point per line, comma separated coordinates."""
    pts = []
    for k, line in _lines(text):
        try:
            pts.append(tuple(parse_number(t) for t in line.split(",")))
        except ParseError as exc:
            raise ParseError(f"line {k}: {exc}") from None
    if not pts:
        raise ParseError("point cloud is empty")
    if len({len(p) for p in pts}) != 1:
        raise ParseError("points have different dimensions")
    return pts
