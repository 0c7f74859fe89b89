"""Slow, independent reference implementations used to check the library.

Nothing here imports the code under test except plain data types.
"""

from fractions import Fraction
from itertools import combinations, permutations

import numpy as np
from hypothesis import strategies as st

from interleaving.intervals import Interval
from interleaving.poset import WeightedPoset


def coords(P):
    return list(P.points) + [P.top]


def naive_maximal(P, eps):
    c = coords(P)
    return [max(q for q in range(len(c)) if c[q] - c[p] <= eps) for p in range(len(c))]


def naive_heights(P):
    c = coords(P)
    return sorted({c[q] - c[p] for p in range(len(c)) for q in range(p, len(c))})


def naive_width(P, I):
    for e in naive_heights(P):
        lam = naive_maximal(P, e)
        if lam[lam[I.lo]] > I.hi:
            return e
    raise AssertionError("unreachable: the largest height sends everything to the top")


def closed_form_width(P, I):
    # best midpoint between the lower end and the point just past the upper end
    c = coords(P)
    return min(max(abs(c[q] - c[I.lo]), abs(c[I.hi + 1] - c[q])) for q in range(len(c)))


def naive_act(P, I, image):
    ps = [p for p in range(P.n) if I.lo <= image[p] <= I.hi]
    return Interval(ps[0], ps[-1]) if ps else None


def naive_pairwise(P, I, M):
    c = coords(P)
    shift = max(abs(c[I.lo] - c[M.lo]), abs(c[I.hi + 1] - c[M.hi + 1]))
    return min(max(naive_width(P, I), naive_width(P, M)), shift)


def exhaustive_bottleneck(pair_cost, w1, w2):
    """Minimum over every partial matching of its height."""
    m, k = len(w1), len(w2)
    best = None
    for r in range(min(m, k) + 1):
        for left in combinations(range(m), r):
            for right in permutations(range(k), r):
                h = Fraction(0)
                for i, j in zip(left, right):
                    h = max(h, pair_cost(i, j))
                h = max([h] + [w1[i] for i in range(m) if i not in left] + [w2[j] for j in range(k) if j not in right])
                best = h if best is None else min(best, h)
    return best


def naive_shift(X):
    X = sorted({Fraction(x) for x in X})
    N1 = sorted({b - a for a, b in combinations(X, 2)})
    Y = sorted(set(X) | {x - e for x in X for e in N1}, reverse=True)
    Z = set(Y)
    for y in Y:
        below = [z for z in Z if z < y]
        if below:
            z = max(below)
            Z |= {z - e for e in N1}
    return sorted(Z)


def naive_classical(B1, B2):
    w1 = [(R - r) / 2 for r, R in B1]
    w2 = [(R - r) / 2 for r, R in B2]

    def cost(i, j):
        (r, R), (s, S) = B1[i], B2[j]
        return min(max(w1[i], w2[j]), max(abs(r - s), abs(R - S)))

    return exhaustive_bottleneck(cost, w1, w2)


def rank_mod_p(A, p):
    """Gaussian elimination on Python ints."""
    M = [[int(v) % p for v in row] for row in np.asarray(A).tolist()]
    rank, cols = 0, (len(M[0]) if M else 0)
    for c in range(cols):
        piv = next((r for r in range(rank, len(M)) if M[r][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, p)
        M[rank] = [v * inv % p for v in M[rank]]
        for r in range(len(M)):
            if r != rank and M[r][c]:
                f = M[r][c]
                M[r] = [(a - f * b) % p for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


# ------------------------------------------------------------- generators


def random_poset(rng, n_max=8, n_min=1, gap_max=6, den=1, b_max=15):
    n = int(rng.integers(n_min, n_max + 1))
    gaps = [Fraction(int(g), den) for g in rng.integers(1, gap_max + 1, size=n - 1)]
    b = Fraction(int(rng.integers(1, b_max + 1)), den)
    return WeightedPoset.from_gaps(gaps, b, start=int(rng.integers(-3, 4)))


def random_interval(rng, P):
    lo = int(rng.integers(0, P.n))
    return Interval(lo, int(rng.integers(lo, P.n)))


def random_barcode(rng, P, max_bars=4):
    return tuple(sorted(random_interval(rng, P) for _ in range(int(rng.integers(0, max_bars + 1)))))


@st.composite
def posets(draw, n_max=7, den_max=3):
    den = draw(st.integers(1, den_max))
    gaps = draw(st.lists(st.integers(1, 8), min_size=0, max_size=n_max - 1))
    b = draw(st.integers(1, 20))
    return WeightedPoset.from_gaps([Fraction(g, den) for g in gaps], Fraction(b, den))


@st.composite
def poset_and_interval(draw, n_max=7):
    P = draw(posets(n_max))
    lo = draw(st.integers(0, P.n - 1))
    hi = draw(st.integers(lo, P.n - 1))
    return P, Interval(lo, hi)


@st.composite
def poset_and_barcode(draw, n_max=7, max_bars=5):
    P = draw(posets(n_max))
    k = draw(st.integers(0, max_bars))
    bars = []
    for _ in range(k):
        lo = draw(st.integers(0, P.n - 1))
        bars.append(Interval(lo, draw(st.integers(lo, P.n - 1))))
    return P, tuple(sorted(bars))


def coordinate_sets(min_size=1, max_size=6, hi=12, den_max=2):
    return st.builds(
        lambda den, xs: sorted({Fraction(x, den) for x in xs}),
        st.integers(1, den_max),
        st.lists(st.integers(0, hi), min_size=min_size, max_size=max_size),
    )
