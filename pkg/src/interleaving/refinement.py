"""Moving between a poset and its refinements.

Continuous barcodes are restricted to a finite poset, barcodes and
translations on ``X`` are inflated to a superset ``Y``, and the shift
refinement ``Sh(X)`` is built.  The module also checks the spacing
regularity of ``X``, builds the interleaving that witnesses irregularity and
runs the discretisation experiment comparing finite distances against the
classical one.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .intervals import Interval, act_barcode_with_provenance
from .matching import (
    MatchingRecord,
    bottleneck_distance,
    bottleneck_from_costs,
    induced_matching_triangle,
    matching_height,
)
from .poset import Translation, WeightedPoset, maximal_translation, to_fraction
from .quiver import Rep, RepMorphism, is_interleaving, morphism_from_generators, act_rep, rep_from_barcode, transition

__all__ = [
    "ContinuousBar",
    "RefinementSchedule",
    "NotASubset",
    "InfiniteBar",
    "EndpointNotInL",
    "InvalidWitness",
    "ShiftGuardExceeded",
    "RegularityWitness",
    "Counterexample",
    "LimitRow",
    "LimitReport",
    "restrict_delta",
    "inflate_module",
    "inflate_translation",
    "inflate_rep",
    "inflate_morphism",
    "floor_map",
    "pairwise_differences",
    "shift_refinement",
    "check_shift_property",
    "shift_poset",
    "shifted_distance",
    "is_regular",
    "irregular_witnesses",
    "counterexample_from_irregularity",
    "classical_distance",
    "mesh",
    "default_schedule",
    "limit_experiment",
]

SHIFT_GUARD = 10_000


class NotASubset(ValueError):
    pass


class InfiniteBar(ValueError):
    pass


class EndpointNotInL(ValueError):
    pass


class InvalidWitness(ValueError):
    pass


class ShiftGuardExceeded(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class ContinuousBar:
    """Half-open bar ``[r, R)``; ``R = None`` means the bar never dies."""

    r: Fraction
    R: Optional[Fraction]
    mult: int = 1

    def __post_init__(self):
        r = to_fraction(self.r)
        R = None if self.R is None else to_fraction(self.R)
        if R is not None and not r < R:
            raise ValueError(f"bar [{r}, {R}) is empty")
        if self.mult < 1:
            raise ValueError("multiplicity must be positive")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "R", R)

    @property
    def finite(self) -> bool:
        return self.R is not None


def _expand(bars: Iterable[ContinuousBar]) -> list[ContinuousBar]:
    out = []
    for bar in bars:
        out.extend([ContinuousBar(bar.r, bar.R)] * bar.mult)
    return out


@dataclass(frozen=True)
class RefinementSchedule:
    base: tuple[Fraction, ...]
    steps: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        base = tuple(sorted({to_fraction(x) for x in self.base}))
        steps = tuple(tuple(sorted({to_fraction(x) for x in s})) for s in self.steps)
        prev = set(base)
        for s in steps:
            if not prev <= set(s):
                raise ValueError("schedule steps must be increasing and contain the base")
            prev = set(s)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "steps", steps)


# --------------------------------------------------------- restriction, inflation


def restrict_delta(X: WeightedPoset, bars: Iterable[ContinuousBar]) -> tuple[Interval, ...]:
    """Each ``[r, R)`` becomes the interval spanning ``X ∩ [r, R)``; empty ones vanish."""
    pts = X.points
    out = []
    for bar in _expand(bars):
        lo = bisect.bisect_left(pts, bar.r)
        hi = X.n - 1 if bar.R is None else bisect.bisect_left(pts, bar.R) - 1
        if lo <= hi:
            out.append(Interval(lo, hi))
    return tuple(out)


def floor_map(X: WeightedPoset, Y: WeightedPoset) -> np.ndarray:
    """For each point of ``Y`` the index of the largest point of ``X`` below it, or -1."""
    if not set(X.points) <= set(Y.points):
        raise NotASubset("X is not contained in Y")
    return np.searchsorted(np.asarray(X.points, dtype=object), np.asarray(Y.points, dtype=object), side="right") - 1


def _check_tops(X: WeightedPoset, Y: WeightedPoset) -> None:
    if X.top != Y.top:
        raise ValueError("X and Y must share the suspension coordinate (use X.refine)")


def inflate_module(X: WeightedPoset, Y: WeightedPoset, bars: Sequence[Interval]) -> tuple[Interval, ...]:
    """``[a, b] -> [a, max(Y ∩ [b, b⁺))]`` with ``b⁺`` the successor of ``b`` in ``X``."""
    fl = floor_map(X, Y)
    out = []
    for bar in bars:
        bar.check(X)
        lo = Y.index(X.points[bar.lo])
        # last y whose floor in X is still b
        hi = int(np.searchsorted(fl, bar.hi, side="right")) - 1
        out.append(Interval(lo, hi))
    return tuple(out)


def inflate_translation(X: WeightedPoset, Y: WeightedPoset, lam: Translation) -> Translation:
    """``Λ̄(y) = max(y, Λ(x_y))`` with ``x_y`` the largest point of ``X`` at or below ``y``."""
    _check_tops(X, Y)
    if len(lam) != X.n + 1:
        raise ValueError("translation does not live on X")
    fl = floor_map(X, Y)
    to_y = [Y.index(x) for x in X.points] + [Y.inf]
    img = []
    for y, f in enumerate(fl):
        img.append(y if f < 0 else max(y, to_y[lam(int(f))]))
    img.append(Y.inf)
    return Translation(tuple(img))


def inflate_rep(X: WeightedPoset, Y: WeightedPoset, R: Rep) -> Rep:
    fl = floor_map(X, Y)
    dims = tuple(R.dims[f] if f >= 0 else 0 for f in fl)
    maps = []
    for y in range(Y.n - 1):
        a, c = int(fl[y]), int(fl[y + 1])
        if a < 0:
            maps.append(np.zeros((dims[y + 1], 0), dtype=np.int64))
        else:
            maps.append(transition(R, a, c))
    bars = inflate_module(X, Y, R.bars) if R.bars is not None else None
    return Rep(dims, tuple(maps), R.p, bars)


def inflate_morphism(X: WeightedPoset, Y: WeightedPoset, f: RepMorphism) -> RepMorphism:
    fl = floor_map(X, Y)
    S, T = inflate_rep(X, Y, f.source), inflate_rep(X, Y, f.target)
    mats = tuple(f.mats[k] if k >= 0 else np.zeros((0, 0), dtype=np.int64) for k in fl)
    return RepMorphism(S, T, mats)


# ------------------------------------------------------------ shift refinement


def pairwise_differences(X: Iterable) -> list[Fraction]:
    pts = sorted({to_fraction(x) for x in X})
    return sorted({b - a for a, b in combinations(pts, 2)})


def shift_refinement(X: Iterable, guard: int = SHIFT_GUARD) -> list[Fraction]:
    """``Sh(X)`` as a sorted list.

    Start from ``Y = X ∪ {x - ε}``; walking ``Y`` from the top down, take the
    largest current point strictly below ``y`` and add all of its shifts
    ``z - ε`` (``ε`` ranging over the pairwise differences of ``X``).
    """
    pts = sorted({to_fraction(x) for x in X})
    if not pts:
        return []
    N1 = pairwise_differences(pts)
    Y = sorted(set(pts) | {x - e for x in pts for e in N1}, reverse=True)
    members = set(Y)
    Z = sorted(members)
    for y in Y:
        k = bisect.bisect_left(Z, y)
        if k == 0:
            continue
        z = Z[k - 1]
        for e in N1:
            q = z - e
            if q not in members:
                members.add(q)
                bisect.insort(Z, q)
        if len(Z) > guard:
            raise ShiftGuardExceeded(f"Sh(X) exceeds {guard} points")
    return Z


def check_shift_property(X: Iterable, S: Sequence[Fraction]) -> bool:
    """For every ``q`` in ``Y = X ∪ (X - N1)`` with a predecessor ``q⁻`` in ``S``,
    and every ``ε`` in ``N1``, ``q⁻ - ε`` lies in ``S``."""
    pts = sorted({to_fraction(x) for x in X})
    N1 = pairwise_differences(pts)
    Y = set(pts) | {x - e for x in pts for e in N1}
    members = set(S)
    for q in Y:
        k = bisect.bisect_left(S, q)
        if k == 0:
            continue
        pred = S[k - 1]
        if any(pred - e not in members for e in N1):
            return False
    return True


def shift_poset(P: WeightedPoset, guard: int = SHIFT_GUARD) -> WeightedPoset:
    """``P_{Sh(X)}`` with the suspension coordinate of ``P`` kept."""
    return P.refine(shift_refinement(P.points, guard))


def shifted_distance(P: WeightedPoset, B1: Sequence[Interval], B2: Sequence[Interval], S: Optional[WeightedPoset] = None) -> Fraction:
    """Bottleneck distance over ``Sh(X)`` between the inflated barcodes."""
    S = shift_poset(P) if S is None else S
    d, _ = bottleneck_distance(S, inflate_module(P, S, B1), inflate_module(P, S, B2))
    return d


# ------------------------------------------------------------------ regularity


@dataclass(frozen=True)
class RegularityWitness:
    """A failure of regularity at ``x_i < x_l`` (0-based indices)."""

    i: int
    l: int
    a: bool
    b: bool
    c: bool

    @property
    def one_based(self) -> tuple[int, int]:
        return self.i + 1, self.l + 1


def _regular_pair(X: WeightedPoset, i: int, l: int, lam: Translation) -> bool:
    # the suspension point takes part as x_n at its real coordinate;
    # indices past it behave as +inf, which satisfies either condition
    x = X.points + (X.top,)
    n = X.n + 1
    gap = x[i + 1] - x[i]
    if l + 2 >= n or x[l + 2] - x[l] > gap:
        return True
    t = 2
    while l + t + 1 < n and x[l + t + 1] - x[l] <= gap:
        t += 1
    k = lam(l + 1)
    if k + 1 >= n:
        return True
    return x[k + 1] > x[l + t] + x[l] - x[i]


def _abc(X: WeightedPoset, i: int, l: int, lam: Translation) -> tuple[bool, bool, bool]:
    n = X.n
    a = l + 1 < n and l + 1 < lam(i + 1)
    b = l + 1 < n and lam(l + 1) < lam(lam(i + 1))
    c = i >= 1 and lam(i - 1) > i - 1
    return a, b, c


def irregular_witnesses(X: WeightedPoset) -> Iterator[RegularityWitness]:
    """Every pair ``i < l`` at which ``X`` fails to be regular."""
    for i in range(X.n - 1):
        for l in range(i + 1, X.n):
            lam = maximal_translation(X, X.points[l] - X.points[i])
            if not _regular_pair(X, i, l, lam):
                yield RegularityWitness(i, l, *_abc(X, i, l, lam))


def is_regular(X: WeightedPoset) -> tuple[bool, Optional[RegularityWitness]]:
    for w in irregular_witnesses(X):
        return False, w
    return True, None


@dataclass(frozen=True)
class Counterexample:
    A: Interval
    C: Interval
    D: Interval
    eps: Fraction
    lam: Translation
    I: Rep
    M: Rep
    phi: RepMorphism
    psi: RepMorphism

    def induced(self, P: WeightedPoset) -> MatchingRecord:
        return induced_matching_triangle(P, self.I, self.M, self.phi, self.psi, self.lam)

    def induced_height(self, P: WeightedPoset) -> Fraction:
        return matching_height(P, self.induced(P), self.I.bars, self.M.bars)


def counterexample_from_irregularity(X: WeightedPoset, witness: RegularityWitness, p: int = 2) -> Counterexample:
    """Interleaving of ``A`` with ``C ⊕ D`` whose induced matching is too tall.

    With ``ε = x_l - x_i`` and ``Λ = Λ_ε``: ``A = [x_i, Λx_{l+1}]``,
    ``C = [x_i, x_l]``, ``D = [x_l, top of AΛ]``, ``φ = Φ_{A,DΛ}`` and
    ``ψ = Φ_{D,AΛ}``.
    """
    i, l = witness.i, witness.l
    if not 0 <= i < l < X.n:
        raise InvalidWitness("witness indices out of range")
    eps = X.points[l] - X.points[i]
    lam = maximal_translation(X, eps)
    a, b, c = _abc(X, i, l, lam)
    if not (a and b and c):
        raise InvalidWitness(f"conditions (a, b, c) = {(a, b, c)} at i={i + 1} l={l + 1}")
    top = lam(l + 1)
    A = Interval(i, top)
    C = Interval(i, l)
    AL = act_barcode_with_provenance(X, [A], lam)
    D = Interval(l, AL[0][0].hi)
    I = rep_from_barcode(X, [A], p)
    M = rep_from_barcode(X, [C, D], p)
    ML = act_rep(M, lam)
    IL = act_rep(I, lam)
    d_pos = [src for _, src in act_barcode_with_provenance(X, [C, D], lam)].index(1)
    phi = morphism_from_generators(X, I, ML, {(0, d_pos): 1})
    psi = morphism_from_generators(X, M, IL, {(1, 0): 1})
    if not is_interleaving(X, I, M, phi, psi, lam):
        raise InvalidWitness("constructed maps do not interleave")
    return Counterexample(A, C, D, eps, lam, I, M, phi, psi)


# ----------------------------------------------------------- continuous limit


def _check_finite(bars):
    for bar in bars:
        if bar.R is None:
            raise InfiniteBar(f"bar [{bar.r}, inf) has no finite width")


def classical_distance(B1: Iterable[ContinuousBar], B2: Iterable[ContinuousBar]) -> Fraction:
    """Bottleneck distance of finite barcodes on the real line."""
    B1, B2 = _expand(B1), _expand(B2)
    _check_finite(B1)
    _check_finite(B2)
    w1 = [(s.R - s.r) / 2 for s in B1]
    w2 = [(t.R - t.r) / 2 for t in B2]
    cost = [
        [min(max(a, b), max(abs(s.r - t.r), abs(s.R - t.R))) for t, b in zip(B2, w2)]
        for s, a in zip(B1, w1)
    ]
    d, _ = bottleneck_from_costs(cost, w1, w2)
    return d


def mesh(points: Sequence[Fraction]) -> Fraction:
    pts = sorted(points)
    return max((b - a for a, b in zip(pts, pts[1:])), default=Fraction(0))


def default_schedule(L: Iterable, steps: int) -> RefinementSchedule:
    """``L``; then ``L`` with every pairwise midpoint; then repeated halving of
    consecutive gaps."""
    base = sorted({to_fraction(x) for x in L})
    chain = [tuple(base)]
    if steps >= 1:
        chain.append(tuple(sorted(set(base) | {(a + b) / 2 for a, b in combinations(base, 2)})))
    for _ in range(2, steps + 1):
        cur = chain[-1]
        chain.append(tuple(sorted(set(cur) | {(a + b) / 2 for a, b in zip(cur, cur[1:])})))
    return RefinementSchedule(tuple(base), tuple(chain))


@dataclass(frozen=True)
class LimitRow:
    step: int
    size: int
    mesh: Fraction
    lower: Fraction
    upper: Fraction
    classical: Fraction


@dataclass(frozen=True)
class LimitReport:
    rows: tuple[LimitRow, ...]
    excluded: tuple[ContinuousBar, ...] = field(default=())


def limit_experiment(
    B1: Iterable[ContinuousBar],
    B2: Iterable[ContinuousBar],
    schedule: RefinementSchedule,
    b=None,
    guard: int = SHIFT_GUARD,
) -> LimitReport:
    """Finite distances along a refinement chain next to the classical distance.

    ``lower`` is the shifted distance and ``upper`` the bottleneck distance
    of the restricted barcodes on each step.  Bars that never die are left
    out and returned in ``excluded``.
    """
    B1, B2 = list(B1), list(B2)
    base = set(schedule.base)
    for bar in B1 + B2:
        for e in (bar.r, bar.R):
            if e is not None and e not in base:
                raise EndpointNotInL(f"endpoint {e} is not in the base set")
    excluded = tuple(bar for bar in B1 + B2 if not bar.finite)
    F1 = [bar for bar in B1 if bar.finite]
    F2 = [bar for bar in B2 if bar.finite]
    classical = classical_distance(F1, F2)
    if b is None:
        b = 2 * (max(schedule.base) - min(schedule.base)) + 1
    top = max(schedule.base) + to_fraction(b)
    rows = []
    for k, pts in enumerate(schedule.steps):
        X = WeightedPoset(pts, top - max(pts))
        R1, R2 = restrict_delta(X, F1), restrict_delta(X, F2)
        upper, _ = bottleneck_distance(X, R1, R2)
        lower = shifted_distance(X, R1, R2, shift_poset(X, guard))
        rows.append(LimitRow(k, X.n, mesh(pts), lower, upper, classical))
    return LimitReport(tuple(rows), excluded)
