"""Acceptance suite: nine end-to-end checks at their stated sizes.

Each check prints one ``PASS``/``FAIL`` line (visible with ``pytest -v`` or
``-s``) and then asserts.  Run alone with::

    pytest tests/test_acceptance.py -v
"""

import sys
import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from builders import interleaving_from_matching, random_interleaving, random_morphism
from interleaving.intervals import all_intervals, pairwise_distance, width, width_v1, width_v2
from interleaving.matching import bottleneck_distance, induced_matching_triangle, matching_height
from interleaving.poset import WeightedPoset, candidate_heights, height
from interleaving.quiver import (
    CapExceeded,
    cokernel,
    decompose,
    image,
    interleaving_distance_bruteforce,
    is_interleaving,
    kernel,
    rep_from_barcode,
)
from interleaving.refinement import (
    ContinuousBar,
    check_shift_property,
    classical_distance,
    counterexample_from_irregularity,
    default_schedule,
    inflate_module,
    irregular_witnesses,
    is_regular,
    limit_experiment,
    mesh,
    restrict_delta,
    shift_poset,
    shift_refinement,
)
from oracles import random_barcode, random_poset

X6 = WeightedPoset((0, 1, 3, 4, 5, 7), 10)
F = Fraction


@pytest.fixture
def report(capsys):
    def emit(number, name, failures, detail, started):
        status = "PASS" if not failures else "FAIL"
        with capsys.disabled():
            sys.stdout.write(f"\n[{status}] criterion {number}: {name} ({detail}; {time.time() - started:.1f}s)\n")
        assert not failures, failures[:5]

    return emit


def test_criterion_1_width_equivalence(report):
    t = time.time()
    rng = np.random.default_rng(101)
    failures, checked = [], 0
    for _ in range(500):
        P = random_poset(rng, n_max=8, den=int(rng.integers(1, 3)))
        for I in all_intervals(P):
            w = (width_v1(P, I), width_v2(P, I), width(P, I))
            checked += 1
            if len(set(w)) != 1:
                failures.append((P, I, w))
    report(1, "three width definitions agree", failures, f"{checked} intervals", t)


def test_criterion_2_distance_formula(report):
    t = time.time()
    rng = np.random.default_rng(202)
    failures, checked = [], 0
    for n in range(1, 6):
        for _ in range(20):
            P = random_poset(rng, n_min=n, n_max=n, den=int(rng.integers(1, 3)))
            bars = all_intervals(P)
            reps = {I: rep_from_barcode(P, [I]) for I in bars}
            for I in bars:
                for M in bars:
                    checked += 1
                    got, ref = pairwise_distance(P, I, M), interleaving_distance_bruteforce(P, reps[I], reps[M])
                    if got != ref:
                        failures.append((P, I, M, got, ref))
    report(2, "closed-form pair distance equals exhaustive oracle", failures, f"{checked} pairs", t)


def test_criterion_3_worked_counterexample(report):
    t = time.time()
    failures = []
    ok, w = is_regular(X6)
    ce = counterexample_from_irregularity(X6, w)
    show = lambda bar: (X6.points[bar.lo], X6.points[bar.hi])
    if (show(ce.A), show(ce.C), show(ce.D), ce.eps) != ((1, 5), (1, 3), (3, 4), 2):
        failures.append(("modules", show(ce.A), show(ce.C), show(ce.D), ce.eps))
    if not is_interleaving(X6, ce.I, ce.M, ce.phi, ce.psi, ce.lam):
        failures.append("interleaving does not verify")
    pairs = [(show(ce.I.bars[i]), show(ce.M.bars[j])) for i, j in ce.induced(X6).pairs]
    if pairs != [((1, 5), (1, 3))]:
        failures.append(("induced pairs", pairs))
    h = ce.induced_height(X6)
    if h != 3:
        failures.append(("induced height", h))
    d_b, _ = bottleneck_distance(X6, ce.I.bars, ce.M.bars)
    d = interleaving_distance_bruteforce(X6, ce.I, ce.M)
    if (d_b, d) != (2, 2):
        failures.append(("distances", d_b, d))
    report(3, "irregular example: verified interleaving, induced height 3 > 2, both distances 2", failures,
           f"pairs={[(tuple(map(int, a)), tuple(map(int, b))) for a, b in pairs]} height={h} D_B={d_b} D={d}", t)


def _induced_height(S, got):
    I, M, phi, psi, lam = got
    return matching_height(S, induced_matching_triangle(S, I, M, phi, psi, lam), I.bars, M.bars)


def test_criterion_4_shifted_matching(report):
    t = time.time()
    rng = np.random.default_rng(404)
    failures, triangles, oracle, skipped = [], 0, 0, 0
    for _ in range(200):
        X = sorted({int(v) for v in rng.integers(0, 10, size=int(rng.integers(1, 6)))})
        P = WeightedPoset(tuple(X), int(rng.integers(1, 8)))
        S = shift_poset(P)
        B1 = inflate_module(P, S, random_barcode(rng, P, 3))
        B2 = inflate_module(P, S, random_barcode(rng, P, 3))
        d, _ = bottleneck_distance(S, B1, B2)
        above = [e for e in candidate_heights(S) if e >= d]
        for eps in {d, above[int(rng.integers(0, len(above)))]}:
            for got in (interleaving_from_matching(S, B1, B2, eps), random_interleaving(rng, S, B1, B2, eps, cap=2**18)):
                if got is None:
                    continue
                triangles += 1
                h = _induced_height(S, got)
                if h > eps:
                    failures.append(("induced height", X, B1, B2, eps, h))
        try:
            ref = interleaving_distance_bruteforce(S, rep_from_barcode(S, B1), rep_from_barcode(S, B2), cap=2**18)
        except CapExceeded:
            skipped += 1
            continue
        oracle += 1
        if ref != d:
            failures.append(("distance", X, B1, B2, ref, d))
    report(4, "induced matchings on Sh(X) stay within eps; D = D_B there", failures,
           f"{triangles} interleavings, {oracle} oracle distances, {skipped} over cap", t)


def _nested(rng):
    L = sorted({int(v) for v in rng.integers(0, 10, size=int(rng.integers(2, 5)))})
    if len(L) < 2:
        L = [L[0], L[0] + 1]
    X = sorted(set(map(F, L)) | {F(int(v), 2) for v in rng.integers(2 * L[0], 2 * L[-1] + 1, size=int(rng.integers(0, 4)))})
    Y = sorted(set(X) | {F(int(v), 4) for v in rng.integers(4 * L[0], 4 * L[-1] + 1, size=int(rng.integers(0, 5)))})
    top = F(L[-1]) + 2 * (L[-1] - L[0]) + 1
    return L, WeightedPoset(tuple(X), top - X[-1]), WeightedPoset(tuple(Y), top - Y[-1])


def _continuous(rng, L, k=3):
    out = []
    for _ in range(int(rng.integers(0, k + 1))):
        a, b = sorted(rng.choice(len(L), size=2, replace=False))
        out.append(ContinuousBar(L[a], L[b]))
    return out


def test_criterion_5_contraction(report):
    t = time.time()
    rng = np.random.default_rng(505)
    failures, brute = [], 0
    for k in range(500):
        L, PX, PY = _nested(rng)
        # inflation on barcodes over X
        B1, B2 = random_barcode(rng, PX, 3), random_barcode(rng, PX, 3)
        j1, j2 = inflate_module(PX, PY, B1), inflate_module(PX, PY, B2)
        dx, dy = bottleneck_distance(PX, B1, B2)[0], bottleneck_distance(PY, j1, j2)[0]
        if dy > dx:
            failures.append(("inflation D_B", PX, PY, B1, B2, dx, dy))
        if k % 5 == 0 and PY.n <= 7:
            try:
                bx = interleaving_distance_bruteforce(PX, rep_from_barcode(PX, B1), rep_from_barcode(PX, B2), cap=2**16)
                by = interleaving_distance_bruteforce(PY, rep_from_barcode(PY, j1), rep_from_barcode(PY, j2), cap=2**16)
            except CapExceeded:
                pass
            else:
                brute += 1
                if by > bx:
                    failures.append(("inflation D", PX, PY, B1, B2, bx, by))
        # restriction of continuous barcodes with endpoints in L
        C1, C2 = _continuous(rng, L), _continuous(rng, L)
        rx = bottleneck_distance(PX, restrict_delta(PX, C1), restrict_delta(PX, C2))[0]
        ry = bottleneck_distance(PY, restrict_delta(PY, C1), restrict_delta(PY, C2))[0]
        c = classical_distance(C1, C2)
        if ry > rx or rx > c + 2 * mesh(PX.points):
            failures.append(("restriction", PX, PY, C1, C2, rx, ry, c))
    report(5, "inflation never increases distances; restriction stays within classical + 2*mesh", failures,
           f"500 instances, {brute} with the exhaustive oracle", t)


def _limit_cases(rng):
    yield [ContinuousBar(0, 4)], [ContinuousBar(1, 5)], [0, 1, 4, 5]
    for _ in range(10):
        L = sorted({int(v) for v in rng.integers(0, 12, size=int(rng.integers(3, 6)))})
        if len(L) < 2:
            L = [L[0], L[0] + 1]
        B1 = _continuous(rng, L) or [ContinuousBar(L[0], L[1])]
        B2 = _continuous(rng, L) or [ContinuousBar(L[0], L[-1])]
        yield B1, B2, L


def test_criterion_6_limit(report):
    t = time.time()
    rng = np.random.default_rng(606)
    failures, rows_checked, exact_rows = [], 0, 0
    for B1, B2, L in _limit_cases(rng):
        c = classical_distance(B1, B2)
        gap = min(b - a for a, b in zip(L, L[1:]))
        # after step 1 the mesh halves each step; go until it is below c/8 and gap/2
        need, m = 1, mesh(default_schedule(L, 1).steps[1])
        while m >= Fraction(gap, 2) or m > c / 8 > 0:
            m /= 2
            need += 1
        rep = limit_experiment(B1, B2, default_schedule(L, need + 1))
        for r in rep.rows:
            if r.mesh <= c / 8:
                rows_checked += 1
                if abs(r.upper - c) > 2 * r.mesh or abs(r.lower - c) > 2 * r.mesh:
                    failures.append(("bound", B1, B2, r))
            if r.mesh < Fraction(gap, 2):
                exact_rows += 1
                if not r.lower == r.upper == c:
                    failures.append(("exact", B1, B2, r))
        if c > 0 and rep.rows[-1].mesh > c / 8:
            failures.append(("schedule too short", B1, B2, rep.rows[-1]))
    report(6, "finite distances converge to the classical one", failures,
           f"{rows_checked} rows with mesh <= classical/8, {exact_rows} exact rows", t)


def _starts(bars):
    return Counter(b.lo for b in bars)


def _ends(bars):
    return Counter(b.hi for b in bars)


def _dominated(small, big):
    return all(big[k] >= v for k, v in small.items())


def test_criterion_7_modules(report):
    t = time.time()
    rng = np.random.default_rng(707)
    failures = []
    for _ in range(1000):
        P = random_poset(rng, n_max=8)
        p = int(rng.choice([2, 3, 5]))
        bars = random_barcode(rng, P, 6)
        if decompose(P, rep_from_barcode(P, bars, p)) != bars:
            failures.append(("round trip", P, bars, p))
    for _ in range(500):
        P = random_poset(rng, n_max=7)
        p = int(rng.choice([2, 3]))
        S, T = (rep_from_barcode(P, random_barcode(rng, P, 4), p) for _ in range(2))
        f = random_morphism(rng, P, S, T)
        K, _ = kernel(f)
        Im, _ = image(f)
        Q, _ = cokernel(f)
        if any(K.dims[v] + Im.dims[v] != S.dims[v] or Im.dims[v] + Q.dims[v] != T.dims[v] for v in range(P.n)):
            failures.append(("exactness", P, S.bars, T.bars))
    checked = 0
    while checked < 200:
        P = random_poset(rng, n_max=6)
        B1, B2 = random_barcode(rng, P, 3), random_barcode(rng, P, 3)
        if rng.random() < 0.5:
            eps = bottleneck_distance(P, B1, B2)[0]
            got = interleaving_from_matching(P, B1, B2, eps)
        else:
            try:
                eps = interleaving_distance_bruteforce(P, rep_from_barcode(P, B1), rep_from_barcode(P, B2), cap=2**16)
            except CapExceeded:
                continue
            got = random_interleaving(rng, P, B1, B2, eps, cap=2**16)
            if got is None:
                continue
        checked += 1
        I, M, phi, psi, lam = got
        h = height(P, lam)
        for f, src in ((phi, I), (psi, M)):
            ker, im, cok = (decompose(P, g(f)[0]) for g in (kernel, image, cokernel))
            tgt = decompose(P, f.target)
            if not (_dominated(_ends(ker), _ends(src.bars)) and _dominated(_ends(im), _ends(tgt))):
                failures.append(("injection ends", P, B1, B2, eps))
            if not (_dominated(_starts(im), _starts(src.bars)) and _dominated(_starts(cok), _starts(tgt))):
                failures.append(("surjection starts", P, B1, B2, eps))
            if any(width(P, b) > h for b in ker + cok):
                failures.append(("kernel/cokernel width", P, B1, B2, eps))
    report(7, "decomposition round trips, exactness, kernel and cokernel bounds", failures,
           "1000 round trips, 500 morphisms, 200 interleavings", t)


def test_criterion_8_shift_property(report):
    t = time.time()
    rng = np.random.default_rng(808)
    failures = []
    for _ in range(500):
        den = int(rng.integers(1, 3))
        X = sorted({F(int(v), den) for v in rng.integers(0, 13, size=int(rng.integers(1, 7)))})
        if not check_shift_property(X, shift_refinement(X)):
            failures.append(X)
    two = shift_refinement([0, 1])
    if two != [-3, -2, -1, 0, 1]:
        failures.append(("Sh({0,1})", two))
    report(8, "shift refinement closure property", failures, f"500 sets, Sh({{0,1}})={[int(x) for x in two]}", t)


def test_criterion_9_regularity(report):
    t = time.time()
    rng = np.random.default_rng(909)
    failures = []
    for n in range(2, 11):
        if not is_regular(WeightedPoset(tuple(range(n))))[0]:
            failures.append(("grid", n))
    ok, w = is_regular(X6)
    if ok or (X6.points[w.i], X6.points[w.l]) != (1, 3):
        failures.append(("X6 witness", w))
    built = 0
    for _ in range(200):
        P = random_poset(rng, n_min=3, n_max=8, gap_max=5, b_max=25)
        for w in irregular_witnesses(P):
            if not w.c:
                continue
            try:
                ce = counterexample_from_irregularity(P, w)
            except ValueError as exc:
                failures.append(("construction", P, w, exc))
                continue
            built += 1
            if ce.induced_height(P) <= ce.eps:
                failures.append(("height", P, w))
    report(9, "grids regular, irregularity witness, counterexamples built", failures,
           f"witness (1,3), {built} counterexamples", t)
