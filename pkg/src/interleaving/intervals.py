"""Interval modules over a weighted chain.

An :class:`Interval` stores indices into ``P.points``; a barcode is a plain
tuple of intervals (multiplicity is repetition).  The zero module is ``None``
wherever an operation can produce it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .poset import (
    Translation,
    WeightedPoset,
    _maximal_image_scaled,
    compose,
    enumerate_translations,
    metric_d,
)

__all__ = [
    "Interval",
    "GeneratorDescriptor",
    "Barcode",
    "hom_dim",
    "generator_phi",
    "act",
    "act_barcode",
    "act_barcode_with_provenance",
    "width",
    "width_v1",
    "width_v2",
    "successor",
    "pairwise_distance",
    "trim_quotient",
    "trim_submodule",
    "multiset",
    "expand",
    "all_intervals",
]


@dataclass(frozen=True, order=True)
class Interval:
    lo: int
    hi: int

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi:
            raise ValueError(f"invalid interval indices [{self.lo}, {self.hi}]")

    def __contains__(self, p: int) -> bool:
        return self.lo <= p <= self.hi

    def coords(self, P: WeightedPoset) -> tuple[Fraction, Fraction]:
        return P.points[self.lo], P.points[self.hi]

    def check(self, P: WeightedPoset) -> "Interval":
        if self.hi >= P.n:
            raise ValueError(f"interval [{self.lo}, {self.hi}] exceeds poset of {P.n} points")
        return self

    @classmethod
    def from_coords(cls, P: WeightedPoset, lo, hi) -> "Interval":
        return cls(P.index(lo), P.index(hi))

    def show(self, P: WeightedPoset) -> str:
        a, b = self.coords(P)
        return f"[{a},{b}]"


Barcode = tuple  # tuple[Interval, ...]; repeated entries carry multiplicity


@dataclass(frozen=True)
class GeneratorDescriptor:
    source: Interval
    target: Interval
    carrier: Optional[Interval]

    @property
    def is_zero(self) -> bool:
        return self.carrier is None


def multiset(bars: Iterable[Interval]) -> Counter:
    return Counter(bars)


def expand(counts) -> tuple[Interval, ...]:
    """Inverse of :func:`multiset`; accepts a mapping or (interval, mult) pairs."""
    items = counts.items() if hasattr(counts, "items") else counts
    out: list[Interval] = []
    for bar, m in sorted(items):
        if m < 1:
            raise ValueError("multiplicities must be positive")
        out.extend([bar] * m)
    return tuple(out)


def all_intervals(P: WeightedPoset) -> list[Interval]:
    return [Interval(i, j) for i in range(P.n) for j in range(i, P.n)]


def hom_dim(P: WeightedPoset, I: Interval, J: Interval) -> int:
    """``dim Hom(I, J)``: 1 iff ``lo(J) <= lo(I) <= hi(J) <= hi(I)``."""
    return int(J.lo <= I.lo <= J.hi <= I.hi)


def generator_phi(P: WeightedPoset, I: Interval, J: Interval) -> GeneratorDescriptor:
    carrier = Interval(I.lo, J.hi) if hom_dim(P, I, J) else None
    return GeneratorDescriptor(I, J, carrier)


def _image_array(lam) -> np.ndarray:
    return lam.array if isinstance(lam, Translation) else np.asarray(lam, dtype=np.int64)


def act(P: WeightedPoset, I: Interval, lam: Translation) -> Optional[Interval]:
    """Support of ``I·Λ``, i.e. ``{p : Λp ∈ I}``, or ``None`` when empty."""
    a = _image_array(lam)[: P.n]
    v = int(np.searchsorted(a, I.lo, side="left"))
    V = int(np.searchsorted(a, I.hi, side="right")) - 1
    if v > V:
        return None
    return Interval(v, V)


def act_barcode_with_provenance(
    P: WeightedPoset, bars: Sequence[Interval], lam: Translation
) -> list[tuple[Interval, int]]:
    """``[(bar·Λ, index of bar)]`` for the bars that survive."""
    out = []
    for k, bar in enumerate(bars):
        shifted = act(P, bar, lam)
        if shifted is not None:
            out.append((shifted, k))
    return out


def act_barcode(P: WeightedPoset, bars: Sequence[Interval], lam: Translation) -> tuple[Interval, ...]:
    return tuple(bar for bar, _ in act_barcode_with_provenance(P, bars, lam))


def successor(P: WeightedPoset, q: int) -> int:
    if not 0 <= q < P.n:
        raise IndexError("successor is defined on finite points only")
    return q + 1


def _escapes(P: WeightedPoset, I: Interval, k: int) -> bool:
    # Λ_ε² (lo) > hi for the maximal translation at scaled threshold k
    img = _maximal_image_scaled(P, k)
    return bool(img[img[I.lo]] > I.hi)


def width(P: WeightedPoset, I: Interval) -> Fraction:
    """Least ``ε`` with ``Hom(I, I·Λ_ε²) = 0``.

    ``Λ_ε`` grows with ``ε``, so the predicate is monotone and a bisection
    over the candidate heights finds the least one.
    """
    I.check(P)
    cands = P.candidate_heights_scaled
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _escapes(P, I, int(cands[mid])):
            hi = mid
        else:
            lo = mid + 1
    return P.unscale(cands[lo])


def _heights_of(P: WeightedPoset, table: np.ndarray) -> np.ndarray:
    c = P.scaled
    return np.max(c[table] - c[None, :], axis=1)


def width_v2(P: WeightedPoset, I: Interval) -> Fraction:
    """``min h(Λ)`` over all translations with ``Hom(I, IΛ²) = 0`` (exhaustive)."""
    table = enumerate_translations(P)
    h = _heights_of(P, table)
    sq = np.take_along_axis(table, table, axis=1)
    ok = sq[:, I.lo] > I.hi
    return P.unscale(np.min(h[ok]))


def width_v1(P: WeightedPoset, I: Interval) -> Fraction:
    """``min max(h(Λ), h(Γ))`` over pairs with ``Hom(I, IΛΓ) = 0`` (exhaustive).

    ``Hom(I, IΛΓ) = 0`` iff ``Λ(Γ(lo)) > hi``, which depends on ``Γ`` only
    through ``g = Γ(lo)``; the cheapest ``Γ`` for each ``g`` is kept.
    """
    table = enumerate_translations(P)
    h = _heights_of(P, table)
    best_gamma: dict[int, int] = {}
    for g, hg in zip(table[:, I.lo].tolist(), h.tolist()):
        if g not in best_gamma or hg < best_gamma[g]:
            best_gamma[g] = hg
    best = None
    for g, hg in best_gamma.items():
        ok = table[:, g] > I.hi
        if ok.any():
            # the cheapest Λ and the cheapest Γ for this g pair freely
            cand = max(int(np.min(h[ok])), hg)
            best = cand if best is None else min(best, cand)
    return P.unscale(best)


def pairwise_distance(P: WeightedPoset, I: Interval, M: Interval) -> Fraction:
    """Interleaving distance between two interval modules, in closed form."""
    wide = max(width(P, I), width(P, M))
    shift = max(
        metric_d(P, I.lo, M.lo),
        metric_d(P, successor(P, I.hi), successor(P, M.hi)),
    )
    return min(wide, shift)


def trim_quotient(P: WeightedPoset, I: Interval, lam: Translation) -> Optional[Interval]:
    """``I^{-Λ²}``: the part of ``I`` whose image under ``Λ²`` stays in ``I``."""
    sq = compose(lam, lam).array[: P.n]
    U0 = int(np.searchsorted(sq, I.hi, side="right")) - 1
    if U0 < I.lo:
        return None
    return Interval(I.lo, U0)


def trim_submodule(P: WeightedPoset, M: Interval, lam: Translation) -> Optional[Interval]:
    """Trimmed submodule ``[Λz, top of MΛ]`` of ``MΛ`` for ``M = [z, Z]``.

    For any interleaving ``φ: I -> MΛ`` the image of ``φΛ`` contains the
    image of ``M -> MΛ²``, so ``im φ`` contains ``Λp`` for every ``p`` with
    ``p, Λ²p`` in ``M``; the least such point is ``Λz``.  Zero when
    ``Λ²z > Z``.  Starting lower (at the least ``v`` with ``Λv >= Λ²z``)
    would not always fit inside ``im φ`` once ``Λ`` merges points.
    """
    lz = lam.image[M.lo]
    if lam.image[lz] > M.hi:
        return None
    return Interval(lz, act(P, M, lam).hi)
