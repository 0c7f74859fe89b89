import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from interleaving.intervals import (
    Interval,
    act,
    act_barcode,
    act_barcode_with_provenance,
    all_intervals,
    expand,
    generator_phi,
    hom_dim,
    multiset,
    pairwise_distance,
    successor,
    trim_quotient,
    trim_submodule,
    width,
    width_v1,
    width_v2,
)
from interleaving.poset import WeightedPoset, compose, height, identity_translation, maximal_translation
from oracles import closed_form_width, naive_act, naive_pairwise, naive_width, poset_and_interval, posets

X6 = WeightedPoset((0, 1, 3, 4, 5, 7), 10)
L2 = maximal_translation(X6, 2)


def iv(lo, hi, P=X6):
    return Interval.from_coords(P, lo, hi)


A, C, D = iv(1, 5), iv(1, 3), iv(3, 4)


def test_interval_rejects_reversed_endpoints():
    with pytest.raises(ValueError):
        Interval(3, 2)
    with pytest.raises(ValueError):
        Interval(0, 6).check(X6)


@pytest.mark.parametrize(
    "I, J, expected",
    [((3, 4), (0, 4), 1), ((1, 3), (0, 4), 0), ((1, 5), (1, 5), 1), ((0, 1), (1, 3), 0)],
)
def test_hom_dim(I, J, expected):
    assert hom_dim(X6, iv(*I), iv(*J)) == expected


def test_generator_carriers():
    assert generator_phi(X6, iv(3, 4), iv(0, 4)).carrier == iv(3, 4)
    assert generator_phi(X6, iv(1, 3), iv(0, 4)).is_zero
    assert generator_phi(X6, A, A).carrier == A


def test_act_examples():
    assert act(X6, A, L2) == iv(0, 4)
    assert act(X6, D, L2) == iv(1, 1)
    assert act(X6, A, identity_translation(X6.n)) == A
    assert act(X6, iv(7, 7), maximal_translation(X6, 100)) is None


def test_act_barcode_drops_zeros_and_tracks_provenance():
    assert act_barcode(X6, [A, D], L2) == (iv(0, 4), iv(1, 1))
    assert act_barcode(X6, [], L2) == ()
    killed = maximal_translation(X6, 100)
    assert act_barcode_with_provenance(X6, [A, D], killed) == []


@pytest.mark.parametrize("bar, w", [((1, 5), 3), ((3, 4), 1), ((1, 3), 2)])
def test_width_examples(bar, w):
    assert width(X6, iv(*bar)) == w


def test_width_can_involve_the_suspension_weight():
    P = WeightedPoset((0, 10), 1)
    # the top sits at 11: [10,10] leaves after one step of size b
    assert width(P, Interval(1, 1)) == P.b == 1
    # Λ_10 sends 0 to 10 and 10 to the top
    assert width(P, Interval(0, 1)) == 10
    # a heavier suspension edge makes the escape route the bottleneck
    assert width(WeightedPoset((0, 10), 30), Interval(0, 1)) == 30


def test_successor():
    P = WeightedPoset((0, 1, 3))
    assert successor(P, 1) == 2
    assert successor(P, 2) == P.inf
    assert X6.points[successor(X6, X6.index(5))] == 7
    with pytest.raises(IndexError):
        successor(P, P.inf)


@pytest.mark.parametrize("I, M, d", [((1, 5), (3, 4), 2), ((1, 5), (1, 3), 3), ((1, 5), (1, 5), 0)])
def test_pairwise_distance_examples(I, M, d):
    assert pairwise_distance(X6, iv(*I), iv(*M)) == d


def test_trim_quotient_examples():
    assert trim_quotient(X6, A, L2) == iv(1, 1)
    assert trim_quotient(X6, D, L2) is None
    assert trim_quotient(X6, A, identity_translation(X6.n)) == A


def test_trim_submodule_examples():
    # lower endpoint is the least v with Λv >= Λ²(lo); here v = 3
    assert trim_submodule(X6, A, L2) == iv(3, 4)
    assert trim_submodule(X6, D, L2) is None
    assert trim_submodule(X6, A, identity_translation(X6.n)) == A


def test_multiset_round_trip():
    bars = (A, A, D)
    assert expand(multiset(bars)) == tuple(sorted(bars))
    with pytest.raises(ValueError):
        expand({A: 0})


@given(poset_and_interval())
def test_width_matches_both_oracles(case):
    P, I = case
    w = width(P, I)
    assert w == naive_width(P, I) == closed_form_width(P, I)


@settings(max_examples=30)
@given(poset_and_interval(n_max=6))
def test_width_variants_agree(case):
    P, I = case
    assert width_v1(P, I) == width_v2(P, I) == width(P, I)


@given(poset_and_interval(), st.integers(0, 30), st.integers(0, 30))
def test_act_matches_oracle_and_composes(case, a, b):
    P, I = case
    la, lb = maximal_translation(P, a), maximal_translation(P, b)
    assert act(P, I, la) == naive_act(P, I, la.image)
    # (I·Λ)·Γ = I·(ΛΓ)
    first = act(P, I, la)
    twice = act(P, first, lb) if first is not None else None
    assert twice == act(P, I, compose(la, lb))


@given(poset_and_interval(), st.integers(0, 40))
def test_hom_into_square_vanishes_exactly_past_width(case, e):
    P, I = case
    lam = maximal_translation(P, e)
    target = act(P, I, compose(lam, lam))
    vanishes = target is None or hom_dim(P, I, target) == 0
    assert vanishes == (width(P, I) <= e)


@settings(max_examples=25)
@given(posets(n_max=5))
def test_pairwise_distance_is_a_pseudometric(P):
    ivs = all_intervals(P)
    D = np.array([[pairwise_distance(P, a, b) for b in ivs] for a in ivs], dtype=object)
    assert all(D[i, i] == 0 for i in range(len(ivs)))
    assert (D == D.T).all()
    k = len(ivs)
    for i in range(k):
        for j in range(k):
            assert all(D[i, j] <= D[i, m] + D[m, j] for m in range(k))


@given(poset_and_interval(), st.data())
def test_pairwise_distance_oracle(case, data):
    P, I = case
    lo = data.draw(st.integers(0, P.n - 1))
    M = Interval(lo, data.draw(st.integers(lo, P.n - 1)))
    assert pairwise_distance(P, I, M) == naive_pairwise(P, I, M)


@given(poset_and_interval(), st.integers(0, 30))
def test_trims_sit_inside_the_interval(case, e):
    P, I = case
    lam = maximal_translation(P, e)
    q = trim_quotient(P, I, lam)
    if q is not None:
        assert q.lo == I.lo and q.hi <= I.hi
    assert (q is None) == (width(P, I) <= height(P, lam))
    s = trim_submodule(P, I, lam)
    if s is not None:
        assert s.hi == act(P, I, lam).hi


def test_trim_submodule_when_translation_merges_points():
    # Λ_2 on {0,3,5,8} sends both 3 and 5 to 5; the trimmed part of [3,5]
    # must start at Λ(3) = 5, the only point any interleaving image covers
    P = WeightedPoset((0, 3, 5, 8), 11)
    lam = maximal_translation(P, 2)
    assert trim_submodule(P, Interval.from_coords(P, 3, 5), lam) == Interval.from_coords(P, 5, 5)
