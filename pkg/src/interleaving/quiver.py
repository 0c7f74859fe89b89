"""Finite-dimensional representations of a linearly oriented chain over F_p.

A :class:`Rep` over a poset with ``n`` points has one vector space per point
and one matrix per arrow ``p -> p+1``.  The suspension point always carries
the zero space, so translating a representation is just re-indexing.

Reps built from a barcode remember the support of each basis summand in
``bars``; the interleaving oracle works on that summand basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels, fp
from .intervals import Interval, hom_dim
from .poset import Translation, WeightedPoset, compose, maximal_translation

__all__ = [
    "Rep",
    "RepMorphism",
    "ShapeMismatch",
    "CapExceeded",
    "DEFAULT_CAP",
    "rep_from_barcode",
    "decompose",
    "rank_function",
    "transition",
    "kernel",
    "image",
    "cokernel",
    "act_rep",
    "act_morphism",
    "internal_map",
    "compose_morphisms",
    "identity_morphism",
    "zero_morphism",
    "morphisms_equal",
    "is_interleaving",
    "morphism_from_generators",
    "find_interleaving",
    "interleaving_exists_bruteforce",
    "interleaving_distance_bruteforce",
]

DEFAULT_CAP = 2**24


class ShapeMismatch(ValueError):
    pass


class CapExceeded(RuntimeError):
    """The exhaustive search space is larger than the configured cap."""


@dataclass(frozen=True, eq=False)
class Rep:
    dims: tuple[int, ...]
    maps: tuple[np.ndarray, ...]
    p: int = 2
    bars: Optional[tuple[Interval, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if any(d < 0 for d in dims):
            raise ValueError("dimensions must be nonnegative")
        maps = tuple(np.asarray(m, dtype=np.int64) % self.p for m in self.maps)
        if len(maps) != max(len(dims) - 1, 0):
            raise ShapeMismatch(f"{len(dims)} vertices need {len(dims) - 1} arrow maps, got {len(maps)}")
        for i, m in enumerate(maps):
            if m.shape != (dims[i + 1], dims[i]):
                raise ShapeMismatch(f"arrow {i}: expected {(dims[i + 1], dims[i])}, got {m.shape}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "maps", maps)

    @property
    def n(self) -> int:
        return len(self.dims)

    def dim(self, v: int) -> int:
        return self.dims[v] if v < self.n else 0

    def basis(self, v: int) -> list[int]:
        """Summand indices spanning vertex ``v`` (barcode-built reps only)."""
        if self.bars is None:
            raise ValueError("representation has no summand basis")
        return [k for k, bar in enumerate(self.bars) if v in bar]


@dataclass(frozen=True, eq=False)
class RepMorphism:
    source: Rep
    target: Rep
    mats: tuple[np.ndarray, ...]

    def __post_init__(self):
        S, T = self.source, self.target
        if S.n != T.n or S.p != T.p:
            raise ShapeMismatch("source and target live on different posets or fields")
        mats = tuple(np.asarray(m, dtype=np.int64) % S.p for m in self.mats)
        if len(mats) != S.n:
            raise ShapeMismatch(f"need {S.n} vertex matrices, got {len(mats)}")
        for v, m in enumerate(mats):
            if m.shape != (T.dims[v], S.dims[v]):
                raise ShapeMismatch(f"vertex {v}: expected {(T.dims[v], S.dims[v])}, got {m.shape}")
        object.__setattr__(self, "mats", mats)

    @property
    def p(self) -> int:
        return self.source.p

    def is_valid(self) -> bool:
        """Every square over an arrow commutes."""
        S, T, p = self.source, self.target, self.p
        for v in range(S.n - 1):
            left = fp.matmul(T.maps[v], self.mats[v], p)
            right = fp.matmul(self.mats[v + 1], S.maps[v], p)
            if not np.array_equal(left, right):
                return False
        return True

    def ranks(self) -> tuple[int, ...]:
        return tuple(fp.rank(m, self.p) for m in self.mats)


def transition(R: Rep, u: int, v: int) -> np.ndarray:
    """``R(u <= v)``; vertices at or past ``R.n`` carry the zero space."""
    if v < u:
        raise ValueError("transition needs u <= v")
    if v >= R.n:
        return fp.zeros(0, R.dim(u))
    out = fp.eye(R.dims[u])
    for a in range(u, v):
        out = fp.matmul(R.maps[a], out, R.p)
    return out


def rep_from_barcode(P: WeightedPoset, bars: Sequence[Interval], p: int = 2) -> Rep:
    """Direct sum of interval modules, one identity chain per bar."""
    bars = tuple(bars)
    for bar in bars:
        bar.check(P)
    n = P.n
    member = np.zeros((len(bars), n), dtype=bool)
    for k, bar in enumerate(bars):
        member[k, bar.lo : bar.hi + 1] = True
    dims = tuple(int(c) for c in member.sum(axis=0))
    maps = []
    for v in range(n - 1):
        src = np.nonzero(member[:, v])[0]
        dst = np.nonzero(member[:, v + 1])[0]
        m = (dst[:, None] == src[None, :]).astype(np.int64)
        maps.append(m)
    return Rep(dims, tuple(maps), p, bars)


def rank_function(R: Rep) -> np.ndarray:
    """``r[u, v] = rank R(u <= v)`` for ``u <= v``, zero below the diagonal."""
    n = R.n
    r = np.zeros((n, n), dtype=np.int64)
    for u in range(n):
        M = fp.eye(R.dims[u])
        r[u, u] = R.dims[u]
        for v in range(u + 1, n):
            M = fp.matmul(R.maps[v - 1], M, R.p)
            r[u, v] = fp.rank(M, R.p)
            if r[u, v] == 0:
                break
    return r


def decompose(P: WeightedPoset, R: Rep) -> tuple[Interval, ...]:
    """Barcode of ``R``, recovered from its rank function.

    A bar ``[u, v]`` is counted by the inclusion-exclusion
    ``r(u,v) - r(u-1,v) - r(u,v+1) + r(u-1,v+1)``.
    """
    if R.n != P.n:
        raise ShapeMismatch("representation and poset sizes differ")
    n = R.n
    r = np.zeros((n + 2, n + 2), dtype=np.int64)
    r[1 : n + 1, 1 : n + 1] = rank_function(R)
    # shifted by one so that u-1 and v+1 are always in range
    mult = r[1:-1, 1:-1] - r[:-2, 1:-1] - r[1:-1, 2:] + r[:-2, 2:]
    out = []
    for u in range(n):
        for v in range(u, n):
            m = int(mult[u, v])
            if m < 0:
                raise AssertionError("negative multiplicity; rank function is inconsistent")
            out.extend([Interval(u, v)] * m)
    return tuple(out)


def _induced(sub_basis: Sequence[np.ndarray], ambient: Rep) -> tuple[np.ndarray, ...]:
    # arrow maps of the subrep whose vertex spaces are the column spans of sub_basis
    p = ambient.p
    maps = []
    for v in range(ambient.n - 1):
        img = fp.matmul(ambient.maps[v], sub_basis[v], p)
        maps.append(fp.solve(sub_basis[v + 1], img, p))
    return tuple(maps)


def kernel(f: RepMorphism) -> tuple[Rep, RepMorphism]:
    p = f.p
    K = [fp.nullspace(m, p) for m in f.mats]
    rep = Rep(tuple(k.shape[1] for k in K), _induced(K, f.source), p)
    return rep, RepMorphism(rep, f.source, tuple(K))


def image(f: RepMorphism) -> tuple[Rep, RepMorphism]:
    p = f.p
    B = [fp.column_basis(m, p) for m in f.mats]
    rep = Rep(tuple(b.shape[1] for b in B), _induced(B, f.target), p)
    return rep, RepMorphism(rep, f.target, tuple(B))


def cokernel(f: RepMorphism) -> tuple[Rep, RepMorphism]:
    p, T = f.p, f.target
    # rows of Q span the left nullspace, so Q is a projection onto coker
    Q = [fp.nullspace(m.T, p).T for m in f.mats]
    maps = []
    for v in range(T.n - 1):
        L = fp.right_inverse(Q[v], p)
        maps.append(fp.matmul(fp.matmul(Q[v + 1], T.maps[v], p), L, p))
    rep = Rep(tuple(q.shape[0] for q in Q), tuple(maps), p)
    return rep, RepMorphism(T, rep, tuple(Q))


def act_rep(R: Rep, lam: Translation) -> Rep:
    """``R·Λ``: vertex ``v`` carries ``R(Λv)``."""
    if len(lam) != R.n + 1:
        raise ShapeMismatch("translation does not match representation")
    img = lam.image
    dims = tuple(R.dim(img[v]) for v in range(R.n))
    maps = tuple(transition(R, img[v], img[v + 1]) for v in range(R.n - 1))
    bars = None
    if R.bars is not None:
        P_n = R.n
        bars = tuple(b for b in (_act_idx(bar, lam, P_n) for bar in R.bars) if b is not None)
    return Rep(dims, maps, R.p, bars)


def _act_idx(bar: Interval, lam: Translation, n: int) -> Optional[Interval]:
    a = lam.array[:n]
    v = int(np.searchsorted(a, bar.lo, side="left"))
    V = int(np.searchsorted(a, bar.hi, side="right")) - 1
    return Interval(v, V) if v <= V else None


def act_morphism(f: RepMorphism, lam: Translation) -> RepMorphism:
    S, T = act_rep(f.source, lam), act_rep(f.target, lam)
    mats = []
    for v in range(S.n):
        w = lam(v)
        mats.append(f.mats[w] if w < f.source.n else fp.zeros(0, 0))
    return RepMorphism(S, T, tuple(mats))


def internal_map(R: Rep, lam: Translation, gam: Translation) -> RepMorphism:
    """Canonical ``R -> R·(ΛΓ)``, vertex-wise ``R(v <= ΛΓv)``."""
    lg = compose(lam, gam)
    target = act_rep(R, lg)
    mats = tuple(transition(R, v, lg(v)) for v in range(R.n))
    return RepMorphism(R, target, mats)


def compose_morphisms(g: RepMorphism, f: RepMorphism) -> RepMorphism:
    """``g ∘ f``."""
    if f.target.dims != g.source.dims:
        raise ShapeMismatch(f"cannot compose: {f.target.dims} vs {g.source.dims}")
    mats = tuple(fp.matmul(b, a, f.p) for a, b in zip(f.mats, g.mats))
    return RepMorphism(f.source, g.target, mats)


def identity_morphism(R: Rep) -> RepMorphism:
    return RepMorphism(R, R, tuple(fp.eye(d) for d in R.dims))


def zero_morphism(S: Rep, T: Rep) -> RepMorphism:
    return RepMorphism(S, T, tuple(fp.zeros(t, s) for s, t in zip(S.dims, T.dims)))


def morphisms_equal(f: RepMorphism, g: RepMorphism) -> bool:
    if f.source.dims != g.source.dims or f.target.dims != g.target.dims:
        return False
    return all(np.array_equal(a, b) for a, b in zip(f.mats, g.mats))


def is_interleaving(P: WeightedPoset, I: Rep, M: Rep, phi: RepMorphism, psi: RepMorphism, lam: Translation) -> bool:
    """Both triangles of a diagonal ``(Λ, Λ)``-interleaving commute."""
    if I.n != P.n or M.n != P.n or len(lam) != P.n + 1:
        raise ShapeMismatch("representations, translation and poset disagree in size")
    IL, ML = act_rep(I, lam), act_rep(M, lam)
    if phi.source.dims != I.dims or phi.target.dims != ML.dims:
        raise ShapeMismatch("phi must map I to M·Λ")
    if psi.source.dims != M.dims or psi.target.dims != IL.dims:
        raise ShapeMismatch("psi must map M to I·Λ")
    if not (phi.is_valid() and psi.is_valid()):
        return False
    left = compose_morphisms(act_morphism(psi, lam), phi)
    right = compose_morphisms(act_morphism(phi, lam), psi)
    return morphisms_equal(left, internal_map(I, lam, lam)) and morphisms_equal(right, internal_map(M, lam, lam))


def morphism_from_generators(
    P: WeightedPoset, source: Rep, target: Rep, coeffs: dict[tuple[int, int], int]
) -> RepMorphism:
    """``sum c_ij Φ_{S_i, T_j}`` between barcode-built reps.

    Keys index ``source.bars`` and ``target.bars``; pairs with no nonzero
    morphism must not appear with a nonzero coefficient.
    """
    if source.bars is None or target.bars is None:
        raise ValueError("generator morphisms need barcode-built representations")
    p = source.p
    mats = [fp.zeros(target.dims[v], source.dims[v]) for v in range(P.n)]
    src_pos = [{k: r for r, k in enumerate(source.basis(v))} for v in range(P.n)]
    tgt_pos = [{k: r for r, k in enumerate(target.basis(v))} for v in range(P.n)]
    for (i, j), c in coeffs.items():
        c %= p
        if not c:
            continue
        S, T = source.bars[i], target.bars[j]
        if not hom_dim(P, S, T):
            raise ValueError(f"no nonzero morphism from {S} to {T}")
        for v in range(S.lo, T.hi + 1):
            mats[v][tgt_pos[v][j], src_pos[v][i]] = (mats[v][tgt_pos[v][j], src_pos[v][i]] + c) % p
    return RepMorphism(source, target, tuple(mats))


# ---------------------------------------------------------------- brute force


def _barcode_rep(P: WeightedPoset, R: Rep) -> Rep:
    return R if R.bars is not None else rep_from_barcode(P, decompose(P, R), R.p)


def _support(P: WeightedPoset, bars: Sequence[Interval]) -> np.ndarray:
    # boolean (len(bars), n + 1); the suspension column is always False
    m = np.zeros((len(bars), P.n + 1), dtype=bool)
    for k, bar in enumerate(bars):
        m[k, bar.lo : bar.hi + 1] = True
    return m


def _half_system(P, A_bars, B_bars, lam, offset_ab, offset_ba, rows, targets):
    """Rows for ``(ψΛ)∘φ = A(v <= Λ²v)`` with φ: A -> BΛ and ψ: B -> AΛ.

    ``offset_ab[i][j]`` / ``offset_ba[j][i]`` are variable ids or -1 when the
    generator vanishes.  Appends (term list, target) pairs.
    """
    img = lam.array
    n = P.n
    verts = np.arange(n)
    l1 = img[verts]
    l2 = img[l1]
    supA = _support(P, A_bars)
    B_act = [_act_idx(b, lam, n) for b in B_bars]
    A_act = [_act_idx(a, lam, n) for a in A_bars]
    # carrier masks over vertices
    car_ab = {}
    for i, a in enumerate(A_bars):
        for j, bl in enumerate(B_act):
            if offset_ab[i][j] >= 0:
                mk = np.zeros(n + 1, dtype=bool)
                mk[a.lo : bl.hi + 1] = True
                car_ab[i, j] = mk
    car_ba = {}
    for j, b in enumerate(B_bars):
        for i, al in enumerate(A_act):
            if offset_ba[j][i] >= 0:
                mk = np.zeros(n + 1, dtype=bool)
                mk[b.lo : al.hi + 1] = True
                car_ba[j, i] = mk
    nB = len(B_bars)
    for i in range(len(A_bars)):
        for i2 in range(len(A_bars)):
            valid = supA[i, verts] & supA[i2, l2]
            if not valid.any():
                continue
            terms = np.zeros((n, nB), dtype=bool)
            for j in range(nB):
                if (i, j) in car_ab and (j, i2) in car_ba:
                    terms[:, j] = car_ab[i, j][verts] & car_ba[j, i2][l1]
            pats = np.unique(terms[valid], axis=0)
            t = int(i == i2)
            for pat in pats:
                js = np.nonzero(pat)[0]
                rows.append(tuple(sorted((offset_ab[i][j], offset_ba[j][i2]) for j in js)))
                targets.append(t)


def _variables(P, A_bars, B_bars, lam, start):
    # variable ids for every nonvanishing generator A_i -> B_j·Λ
    ids = []
    nxt = start
    for a in A_bars:
        row = []
        for b in B_bars:
            bl = _act_idx(b, lam, P.n)
            if bl is not None and hom_dim(P, a, bl):
                row.append(nxt)
                nxt += 1
            else:
                row.append(-1)
        ids.append(row)
    return ids, nxt


def _components(nvars: int, rows: Sequence[tuple]) -> list[list[int]]:
    parent = list(range(nvars))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for terms in rows:
        flat = [v for t in terms for v in t]
        for v in flat[1:]:
            ra, rb = find(flat[0]), find(v)
            if ra != rb:
                parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for r, terms in enumerate(rows):
        if terms:
            groups.setdefault(find(terms[0][0]), []).append(r)
    return list(groups.values())


def find_interleaving(
    P: WeightedPoset,
    I: Rep,
    M: Rep,
    eps,
    cap: int = DEFAULT_CAP,
    rng: Optional[np.random.Generator] = None,
) -> Optional[tuple[RepMorphism, RepMorphism]]:
    """A ``(Λ_ε, Λ_ε)``-interleaving ``(φ, ψ)`` or ``None``, by exhaustive search.

    Morphisms are written as scalar combinations of generators between
    summands, which turns both triangle identities into quadratic equations
    over F_p.  Independent blocks of unknowns are searched separately; each
    block's ``p**size`` must stay within ``cap``.  With ``rng`` the search in
    each block starts at a random assignment, so repeated calls sample
    different witnesses.  Non-barcode reps are replaced by the barcode rep of
    their decomposition, and the witness refers to those.
    """
    I = _barcode_rep(P, I)
    M = _barcode_rep(P, M)
    if I.p != M.p:
        raise ShapeMismatch("representations over different fields")
    p = I.p
    lam = maximal_translation(P, eps)
    A, B = I.bars, M.bars
    ab, nv = _variables(P, A, B, lam, 0)
    ba, nv = _variables(P, B, A, lam, nv)
    rows: list[tuple] = []
    targets: list[int] = []
    _half_system(P, A, B, lam, ab, ba, rows, targets)
    _half_system(P, B, A, lam, ba, ab, rows, targets)
    system = {}
    for terms, t in zip(rows, targets):
        if system.setdefault(terms, t) != t:
            return None
        if not terms and t % p:
            return None
    rows = [r for r in system if r]
    targets = [system[r] for r in rows]
    x = np.zeros(nv, dtype=np.int64)
    for comp in _components(nv, rows):
        crow = [rows[r] for r in comp]
        ctgt = [targets[r] for r in comp]
        if not any(ctgt):
            continue  # zero is a solution of a homogeneous block
        used = sorted({v for terms in crow for t in terms for v in t})
        local = {v: k for k, v in enumerate(used)}
        total = p ** len(used)
        if total > cap:
            raise CapExceeded(f"block of {len(used)} unknowns over F_{p} exceeds cap {cap}")
        term_a, term_b, ptr = [], [], [0]
        for terms in crow:
            for a, b in terms:
                term_a.append(local[a])
                term_b.append(local[b])
            ptr.append(len(term_a))
        start = int(rng.integers(total)) if rng is not None else 0
        code = _kernels.search_assignments(
            np.asarray(term_a, dtype=np.int64),
            np.asarray(term_b, dtype=np.int64),
            np.asarray(ptr, dtype=np.int64),
            np.asarray(ctgt, dtype=np.int64) % p,
            len(used),
            p,
            start,
            total,
        )
        if code < 0:
            return None
        for k, v in enumerate(used):
            x[v] = code % p
            code //= p
    ML, IL = act_rep(M, lam), act_rep(I, lam)
    phi = morphism_from_generators(P, I, ML, _coeffs(ab, x, B, lam, P.n))
    psi = morphism_from_generators(P, M, IL, _coeffs(ba, x, A, lam, P.n))
    return phi, psi


def _coeffs(ids, x, tgt_bars, lam, n) -> dict[tuple[int, int], int]:
    # translate generator ids (indexed by target bars) to positions in the translated barcode
    pos, k = {}, 0
    for j, b in enumerate(tgt_bars):
        if _act_idx(b, lam, n) is not None:
            pos[j] = k
            k += 1
    out = {}
    for i, row in enumerate(ids):
        for j, v in enumerate(row):
            if v >= 0 and x[v]:
                out[i, pos[j]] = int(x[v])
    return out


def interleaving_exists_bruteforce(P: WeightedPoset, I: Rep, M: Rep, eps, cap: int = DEFAULT_CAP) -> bool:
    return find_interleaving(P, I, M, eps, cap) is not None


def interleaving_distance_bruteforce(P: WeightedPoset, I: Rep, M: Rep, cap: int = DEFAULT_CAP):
    """Least candidate height admitting a diagonal interleaving.

    Existence is monotone in ``ε`` (post-compose with internal maps), so the
    candidate list is bisected.
    """
    I = _barcode_rep(P, I)
    M = _barcode_rep(P, M)
    cands = P.candidate_heights_scaled
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if interleaving_exists_bruteforce(P, I, M, P.unscale(cands[mid]), cap):
            hi = mid
        else:
            lo = mid + 1
    return P.unscale(cands[lo])
