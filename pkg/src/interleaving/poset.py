"""Weighted finite chains suspended at infinity, and their translations.

A poset ``P`` is a strictly increasing tuple of exact rationals ``x_0 < ... <
x_{n-1}`` together with a positive weight ``b`` on the edge from the maximum
to the added top element.  Points of ``P^+`` are plain integers: ``0 .. n-1``
index the finite points and ``n`` (``P.inf``) is the suspension point.

Distances are the weighted path metric on the Hasse quiver, which places the
suspension point at coordinate ``max(X) + b``.  Internally every coordinate is
rescaled by a common denominator so comparisons run on integers (numpy int64
when it fits, Python ints in an object array otherwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "WeightedPoset",
    "Translation",
    "metric_d",
    "height",
    "maximal_translation",
    "compose",
    "candidate_heights",
    "leq_translation",
    "identity_translation",
    "enumerate_translations",
    "default_b",
    "to_fraction",
]

_INT64_SAFE = 2**62


def to_fraction(value) -> Fraction:
    """Exact rational from an int, Fraction or decimal string.

    Floats are rejected: they would silently carry binary rounding.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError(f"float {value!r} is not exact; pass a string or Fraction")
    return Fraction(value)


def default_b(points: Sequence) -> Fraction:
    """Suspension weight used when none is given: ``2*(max - min) + 1``."""
    pts = [to_fraction(p) for p in points]
    return 2 * (max(pts) - min(pts)) + 1


@dataclass(frozen=True)
class WeightedPoset:
    points: tuple[Fraction, ...]
    b: Fraction = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        pts = tuple(to_fraction(p) for p in self.points)
        if not pts:
            raise ValueError("a poset needs at least one point")
        for a, c in zip(pts, pts[1:]):
            if not a < c:
                raise ValueError(f"points must be strictly increasing, got {a} then {c}")
        b = default_b(pts) if self.b is None else to_fraction(self.b)
        if b <= 0:
            raise ValueError(f"suspension weight must be positive, got {b}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_gaps(cls, gaps: Iterable, b, start=0) -> "WeightedPoset":
        """Build ``{m, m+a_1, m+a_1+a_2, ...}`` from edge weights ``a_i``."""
        x = to_fraction(start)
        pts = [x]
        for a in gaps:
            x = x + to_fraction(a)
            pts.append(x)
        return cls(tuple(pts), b)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def inf(self) -> int:
        """Index of the suspension point."""
        return len(self.points)

    @property
    def top(self) -> Fraction:
        """Coordinate of the suspension point."""
        return self.points[-1] + self.b

    def coord(self, p: int) -> Fraction:
        self._check_point(p)
        return self.top if p == self.inf else self.points[p]

    def index(self, x) -> int:
        """Index of the finite point with coordinate ``x``."""
        x = to_fraction(x)
        i = self._lookup.get(x)
        if i is None:
            raise KeyError(f"{x} is not a point of the poset")
        return i

    def gaps(self) -> tuple[Fraction, ...]:
        return tuple(c - a for a, c in zip(self.points, self.points[1:]))

    def refine(self, points: Iterable) -> "WeightedPoset":
        """Superset poset with the suspension point kept at the same coordinate.

        Keeping ``max + b`` fixed is what makes inflated translations keep
        their height.
        """
        pts = sorted(set(self.points) | {to_fraction(p) for p in points})
        b = self.top - pts[-1]
        if b <= 0:
            raise ValueError("refinement reaches past the suspension point")
        return WeightedPoset(tuple(pts), b)

    def _check_point(self, p: int) -> None:
        if not 0 <= p <= self.inf:
            raise IndexError(f"point index {p} outside 0..{self.inf}")

    @cached_property
    def _lookup(self) -> dict[Fraction, int]:
        return {x: i for i, x in enumerate(self.points)}

    @cached_property
    def scale(self) -> int:
        """Common denominator of all coordinates (suspension point included)."""
        den = 1
        for x in self.points + (self.b,):
            den = math.lcm(den, x.denominator)
        return den

    @cached_property
    def scaled(self) -> np.ndarray:
        """Integer coordinates of ``P^+`` multiplied by :attr:`scale`."""
        vals = [int(x * self.scale) for x in self.points]
        vals.append(int(self.top * self.scale))
        if max(abs(vals[0]), abs(vals[-1])) * 2 < _INT64_SAFE:
            return np.asarray(vals, dtype=np.int64)
        return np.asarray(vals, dtype=object)

    def unscale(self, k) -> Fraction:
        return Fraction(int(k), self.scale)

    def scale_value(self, eps) -> int:
        """``floor(eps * scale)``; exact for thresholds on integer coordinates."""
        return math.floor(to_fraction(eps) * self.scale)

    @cached_property
    def candidate_heights_scaled(self) -> np.ndarray:
        c = self.scaled
        diffs = c[None, :] - c[:, None]
        iu = np.triu_indices(len(c))
        return np.unique(diffs[iu])

    def __repr__(self) -> str:
        pts = ", ".join(str(x) for x in self.points)
        return f"WeightedPoset([{pts}], b={self.b})"


@dataclass(frozen=True)
class Translation:
    """Monotone, inflationary self-map of ``P^+`` fixing the suspension point.

    ``image[p]`` is the image of point ``p``; ``len(image) == P.n + 1``.
    """

    image: tuple[int, ...]

    def __post_init__(self):
        img = tuple(int(v) for v in self.image)
        top = len(img) - 1
        if top < 1:
            raise ValueError("translation must cover at least one finite point and infinity")
        if img[top] != top:
            raise ValueError("translations fix the suspension point")
        for p, v in enumerate(img):
            if v < p or v > top:
                raise ValueError(f"translation is not inflationary at {p}: {p} -> {v}")
            if p and v < img[p - 1]:
                raise ValueError(f"translation is not monotone at {p}")
        object.__setattr__(self, "image", img)

    def __call__(self, p: int) -> int:
        return self.image[p]

    def __len__(self) -> int:
        return len(self.image)

    def __iter__(self) -> Iterator[int]:
        return iter(self.image)

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.image, dtype=np.int64)

    def power(self, k: int) -> "Translation":
        out = identity_translation(len(self.image) - 1)
        for _ in range(k):
            out = compose(self, out)
        return out

    @classmethod
    def from_coords(cls, P: WeightedPoset, mapping: dict) -> "Translation":
        """Build from ``{coordinate: coordinate}``; ``"inf"`` names the top.

        Unlisted points are fixed.
        """

        def idx(v):
            if isinstance(v, str) and v.strip().lower() in {"inf", "infinity", "∞"}:
                return P.inf
            return P.index(v)

        img = list(range(P.n + 1))
        for k, v in mapping.items():
            img[idx(k)] = idx(v)
        return cls(tuple(img))


def identity_translation(n: int) -> Translation:
    return Translation(tuple(range(n + 1)))


def metric_d(P: WeightedPoset, p: int, q: int) -> Fraction:
    return abs(P.coord(p) - P.coord(q))


def height(P: WeightedPoset, lam: Translation) -> Fraction:
    _check_same(P, lam)
    c = P.scaled
    return P.unscale(np.max(c[lam.array] - c))


def _maximal_image_scaled(P: WeightedPoset, k: int) -> np.ndarray:
    # Largest q with c[q] <= c[p] + k; c is increasing so searchsorted suffices.
    c = P.scaled
    return np.searchsorted(c, c + k, side="right").astype(np.int64) - 1


def maximal_translation(P: WeightedPoset, eps) -> Translation:
    """The unique maximal translation ``Λ_ε`` of height at most ``eps``."""
    eps = to_fraction(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return Translation(tuple(_maximal_image_scaled(P, P.scale_value(eps)).tolist()))


def compose(lam: Translation, gam: Translation) -> Translation:
    """``(lam ∘ gam)(p) = lam(gam(p))``."""
    if len(lam) != len(gam):
        raise ValueError("translations live on different posets")
    return Translation(tuple(lam.image[g] for g in gam.image))


def candidate_heights(P: WeightedPoset) -> list[Fraction]:
    """Sorted set ``{d(p, q) : p <= q in P^+}``."""
    return [P.unscale(k) for k in P.candidate_heights_scaled]


def leq_translation(lam: Translation, gam: Translation) -> bool:
    if len(lam) != len(gam):
        raise ValueError("translations live on different posets")
    return all(a <= b for a, b in zip(lam.image, gam.image))


def _check_same(P: WeightedPoset, lam: Translation) -> None:
    if len(lam) != P.n + 1:
        raise ValueError(f"translation of size {len(lam)} does not match poset with {P.n} points")


@lru_cache(maxsize=16)
def _translation_table(n: int) -> np.ndarray:
    rows: list[list[int]] = []

    def rec(prefix: list[int], p: int) -> None:
        if p == n:
            rows.append(prefix + [n])
            return
        lo = max(p, prefix[-1] if prefix else 0)
        for v in range(lo, n + 1):
            prefix.append(v)
            rec(prefix, p + 1)
            prefix.pop()

    rec([], 0)
    table = np.asarray(rows, dtype=np.int64)
    table.setflags(write=False)
    return table


def enumerate_translations(P: WeightedPoset) -> np.ndarray:
    """Every translation of ``P^+`` as rows of an int array.

    There are Catalan(n + 1) of them; intended for small test oracles.
    """
    if P.n > 10:
        raise ValueError("exhaustive translation enumeration is limited to 10 points")
    return _translation_table(P.n)
