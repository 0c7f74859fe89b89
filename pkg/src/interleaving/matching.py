"""Partial matchings between barcodes: heights, bottleneck search and the
matching induced by an interleaving."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .intervals import Interval, act_barcode_with_provenance, metric_d, width
from .poset import Translation, WeightedPoset
from .quiver import Rep, RepMorphism, decompose, image

__all__ = [
    "MatchingRecord",
    "EnumeratedGroup",
    "GroupSizeViolation",
    "pair_cost",
    "matching_height",
    "is_eps_matching",
    "bottleneck_from_costs",
    "bottleneck_distance",
    "enumerate_lower",
    "enumerate_upper",
    "induced_matching_onto",
    "induced_matching_into",
    "barcode_shift_map",
    "induced_matching_triangle",
    "compose_matchings",
]


class GroupSizeViolation(ValueError):
    pass


@dataclass(frozen=True)
class MatchingRecord:
    """Partial bijection between two indexed barcodes."""

    pairs: tuple[tuple[int, int], ...]
    unmatched_left: tuple[int, ...]
    unmatched_right: tuple[int, ...]

    @classmethod
    def from_pairs(cls, pairs, n_left: int, n_right: int) -> "MatchingRecord":
        pairs = tuple(sorted((int(i), int(j)) for i, j in pairs))
        left = {i for i, _ in pairs}
        right = {j for _, j in pairs}
        rec = cls(
            pairs,
            tuple(i for i in range(n_left) if i not in left),
            tuple(j for j in range(n_right) if j not in right),
        )
        rec.check(n_left, n_right)
        return rec

    def check(self, n_left: int, n_right: int) -> None:
        left = [i for i, _ in self.pairs] + list(self.unmatched_left)
        right = [j for _, j in self.pairs] + list(self.unmatched_right)
        if sorted(left) != list(range(n_left)) or sorted(right) != list(range(n_right)):
            raise ValueError("matching is not a partial bijection covering both barcodes")

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


@dataclass(frozen=True)
class EnumeratedGroup:
    key: int
    members: tuple[tuple[Interval, int], ...]  # (bar, provenance tag)


def pair_cost(P: WeightedPoset, s: Interval, t: Interval, ws=None, wt=None) -> Fraction:
    """Interleaving distance of two interval modules (widths may be passed in)."""
    ws = width(P, s) if ws is None else ws
    wt = width(P, t) if wt is None else wt
    shift = max(metric_d(P, s.lo, t.lo), metric_d(P, s.hi + 1, t.hi + 1))
    return min(max(ws, wt), shift)


def _costs(P, B1, B2):
    w1 = [width(P, s) for s in B1]
    w2 = [width(P, t) for t in B2]
    cost = [[pair_cost(P, s, t, a, b) for t, b in zip(B2, w2)] for s, a in zip(B1, w1)]
    return cost, w1, w2


def matching_height(P: WeightedPoset, m: MatchingRecord, B1: Sequence[Interval], B2: Sequence[Interval]) -> Fraction:
    m.check(len(B1), len(B2))
    vals = [Fraction(0)]
    vals += [pair_cost(P, B1[i], B2[j]) for i, j in m.pairs]
    vals += [width(P, B1[i]) for i in m.unmatched_left]
    vals += [width(P, B2[j]) for j in m.unmatched_right]
    return max(vals)


def is_eps_matching(P: WeightedPoset, m: MatchingRecord, B1, B2, eps) -> bool:
    return matching_height(P, m, B1, B2) <= Fraction(eps)


def _feasible(cost, w1, w2, eps) -> Optional[list[tuple[int, int]]]:
    """Pairs of a matching of height <= eps, or None.

    Bipartite graph: left side is B1 plus one diagonal slot per bar of B2,
    right side is B2 plus one diagonal slot per bar of B1.  A perfect matching
    exists iff an eps-matching does.
    """
    m, k = len(w1), len(w2)
    N = m + k
    if N == 0:
        return []
    rows, cols = [], []
    for i in range(m):
        for j in range(k):
            if cost[i][j] <= eps:
                rows.append(i)
                cols.append(j)
        if w1[i] <= eps:
            rows.append(i)
            cols.append(k + i)
    for j in range(k):
        if w2[j] <= eps:
            rows.append(m + j)
            cols.append(j)
        for i in range(m):
            rows.append(m + j)
            cols.append(k + i)
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(N, N))
    match = maximum_bipartite_matching(graph, perm_type="column")
    if np.any(match < 0):
        return None
    return [(i, int(match[i])) for i in range(m) if match[i] < k]


def bottleneck_from_costs(cost, w1, w2) -> tuple[Fraction, MatchingRecord]:
    """Least ``eps`` admitting an eps-matching for the given pair costs and
    unmatched costs, plus a witness.

    Feasibility is monotone in ``eps``, so the finite candidate set is
    bisected.
    """
    cands = sorted({Fraction(0)} | {c for row in cost for c in row} | set(w1) | set(w2))
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(cost, w1, w2, cands[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    best = _feasible(cost, w1, w2, cands[lo])
    return cands[lo], MatchingRecord.from_pairs(best, len(w1), len(w2))


def bottleneck_distance(P: WeightedPoset, B1: Sequence[Interval], B2: Sequence[Interval]) -> tuple[Fraction, MatchingRecord]:
    cost, w1, w2 = _costs(P, B1, B2)
    return bottleneck_from_costs(cost, w1, w2)


# ----------------------------------------------------------- induced matching


def _tagged(B, tags):
    return list(zip(B, range(len(B)) if tags is None else tags))


def enumerate_lower(P: WeightedPoset, B: Sequence[Interval], x: int, tags=None) -> EnumeratedGroup:
    """Bars starting at ``x``, longest first; ties by tag."""
    mem = [(bar, t) for bar, t in _tagged(B, tags) if bar.lo == x]
    mem.sort(key=lambda bt: (-bt[0].hi, bt[1]))
    return EnumeratedGroup(x, tuple(mem))


def enumerate_upper(P: WeightedPoset, B: Sequence[Interval], y: int, tags=None) -> EnumeratedGroup:
    """Bars ending at ``y``, longest first; ties by tag."""
    mem = [(bar, t) for bar, t in _tagged(B, tags) if bar.hi == y]
    mem.sort(key=lambda bt: (bt[0].lo, bt[1]))
    return EnumeratedGroup(y, tuple(mem))


def _canonical(P, big, small, key, enum, big_tags, small_tags) -> list[tuple[int, int]]:
    # pairs (index in big, index in small); positions are matched in enumeration order
    big_idx = {(bar, t): k for k, (bar, t) in enumerate(_tagged(big, big_tags))}
    small_idx = {(bar, t): k for k, (bar, t) in enumerate(_tagged(small, small_tags))}
    pairs = []
    for e in sorted({key(bar) for bar in small}):
        gb = enum(P, big, e, big_tags).members
        gs = enum(P, small, e, small_tags).members
        if len(gs) > len(gb):
            raise GroupSizeViolation(f"{len(gs)} bars at endpoint {e} but only {len(gb)} to receive them")
        for s, b in zip(gs, gb):
            pairs.append((big_idx[b], small_idx[s]))
    return pairs


def induced_matching_onto(P: WeightedPoset, B_source, B_image, source_tags=None, image_tags=None) -> MatchingRecord:
    """Matching ``(source index, image index)`` grouped by lower endpoints."""
    pairs = _canonical(P, B_source, B_image, lambda b: b.lo, enumerate_lower, source_tags, image_tags)
    return MatchingRecord.from_pairs(pairs, len(B_source), len(B_image))


def induced_matching_into(P: WeightedPoset, B_sub, B_target, sub_tags=None, target_tags=None) -> MatchingRecord:
    """Matching ``(sub index, target index)`` grouped by upper endpoints."""
    pairs = _canonical(P, B_target, B_sub, lambda b: b.hi, enumerate_upper, target_tags, sub_tags)
    return MatchingRecord.from_pairs([(s, t) for t, s in pairs], len(B_sub), len(B_target))


def barcode_shift_map(P: WeightedPoset, B_M: Sequence[Interval], lam: Translation) -> dict[int, int]:
    """Index in ``act_barcode(B_M, Λ)`` -> index in ``B_M`` of the bar it came from."""
    return {k: src for k, (_, src) in enumerate(act_barcode_with_provenance(P, B_M, lam))}


def compose_matchings(first: MatchingRecord, second: MatchingRecord, n_left: int, n_right: int) -> MatchingRecord:
    """``second ∘ first`` as partial bijections."""
    f, g = first.as_dict(), second.as_dict()
    pairs = [(i, g[j]) for i, j in f.items() if j in g]
    return MatchingRecord.from_pairs(pairs, n_left, n_right)


def induced_matching_triangle(
    P: WeightedPoset, I: Rep, M: Rep, phi: RepMorphism, psi: RepMorphism, lam: Translation
) -> MatchingRecord:
    """Matching ``B(I) -> B(M)`` induced by ``φ: I -> MΛ``.

    ``φ`` factors as a surjection onto its image followed by an injection;
    bars of ``I`` go to bars of ``im φ`` by lower endpoint, those go to bars of
    ``MΛ`` by upper endpoint, and each bar of ``MΛ`` is sent back to the bar
    of ``M`` it was translated from.  ``psi`` is accepted for symmetry with
    the interleaving it belongs to; the matching only depends on ``φ``.
    """
    BI = I.bars if I.bars is not None else decompose(P, I)
    BM = M.bars if M.bars is not None else decompose(P, M)
    shifted = act_barcode_with_provenance(P, BM, lam)
    BML = [bar for bar, _ in shifted]
    Bim = decompose(P, image(phi)[0])
    onto = induced_matching_onto(P, BI, Bim)  # (I index, im index)
    into = induced_matching_into(P, Bim, BML, target_tags=[src for _, src in shifted])  # (im, MΛ)
    through = compose_matchings(onto, into, len(BI), len(BML))
    back = barcode_shift_map(P, BM, lam)
    pairs = [(i, back[k]) for i, k in through.pairs]
    return MatchingRecord.from_pairs(pairs, len(BI), len(BM))
