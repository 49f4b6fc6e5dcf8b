"""Magnus truncations: Z[F]/f^N as noncommutative polynomials of degree < N.

``x_i -> 1 + X_i`` identifies Z[F]/f^N with the tensor algebra on
``X_1..X_d`` cut off at degree N.  Ideals of Z[F] map to Z-lattices in that
finite-rank ring; containment, sums, intersections and quotients are then
exact lattice computations.  Images of intersections can be larger than
intersections of images, which is why quotients are swept over N.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .exactalg import AbGroup, _insert, hermite_rows, kernel_basis, IntMatrix, solve_in_basis, subquotient
from .freegrp import FreeWord
from .frlang import check_word


class DegreeTooSmall(ValueError):
    pass


class AmbientMismatch(ValueError):
    pass


class NotSubLattice(ValueError):
    pass


@dataclass(frozen=True)
class TruncRing:
    num_generators: int
    degree: int  # N: monomials of degree >= N vanish
    monomials: tuple = field(init=False, compare=False, repr=False)
    index: dict = field(init=False, compare=False, repr=False)
    _right: tuple = field(init=False, compare=False, repr=False)
    _left: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        d, N = self.num_generators, self.degree
        mons = []
        for k in range(N):
            mons += list(itertools.product(range(d), repeat=k))
        idx = {m: i for i, m in enumerate(mons)}
        right = tuple(
            tuple(idx.get(m + (i,)) for m in mons) for i in range(d)
        )
        left = tuple(
            tuple(idx.get((i,) + m) for m in mons) for i in range(d)
        )
        object.__setattr__(self, "monomials", tuple(mons))
        object.__setattr__(self, "index", idx)
        object.__setattr__(self, "_right", right)
        object.__setattr__(self, "_left", left)

    @property
    def dim(self):
        return len(self.monomials)

    def mul(self, a, b):
        out = {}
        N = self.degree
        for m, x in a.items():
            for n, y in b.items():
                if len(m) + len(n) < N:
                    k = m + n
                    out[k] = out.get(k, 0) + x * y
        return {k: v for k, v in out.items() if v}

    def one(self):
        return {(): 1}

    def gen(self, i, power=1):
        """Image of ``x_i^power``."""
        if power >= 0:
            out = self.one()
            for _ in range(power):
                out = self.mul(out, {(): 1, (i,): 1})
            return out
        inv = {(i,) * k: (-1) ** k for k in range(self.degree)}
        out = self.one()
        for _ in range(-power):
            out = self.mul(out, inv)
        return out

    def vector(self, elem):
        v = [0] * self.dim
        for m, c in elem.items():
            if len(m) < self.degree:
                v[self.index[m]] += c
        return v

    def element(self, vec):
        return {self.monomials[k]: c for k, c in enumerate(vec) if c}

    def right_times(self, vec, i):
        out = [0] * self.dim
        tgt = self._right[i]
        for k, c in enumerate(vec):
            if c and tgt[k] is not None:
                out[tgt[k]] += c
        return out

    def left_times(self, vec, i):
        out = [0] * self.dim
        tgt = self._left[i]
        for k, c in enumerate(vec):
            if c and tgt[k] is not None:
                out[tgt[k]] += c
        return out


def embed(x, R):
    """Magnus image of a FreeWord or GroupRingElement."""
    if isinstance(x, FreeWord):
        out = R.one()
        for a in x.letters:
            i = abs(a) - 1
            if i >= R.num_generators:
                raise ValueError(f"generator {i} outside the truncated ring")
            out = R.mul(out, R.gen(i, 1 if a > 0 else -1))
        return out
    out = {}
    for w, c in x.terms.items():
        for m, v in embed(w, R).items():
            out[m] = out.get(m, 0) + c * v
    return {k: v for k, v in out.items() if v}


class IdealLattice:
    """A Z-lattice in a truncated ring, kept in canonical Hermite form."""

    def __init__(self, ring, rows=()):
        self.ring = ring
        self.basis = hermite_rows(rows, ring.dim)

    @property
    def rank(self):
        return len(self.basis)

    def __eq__(self, other):
        return (isinstance(other, IdealLattice) and self.ring == other.ring
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ring, tuple(map(tuple, self.basis))))

    def __contains__(self, vec):
        return solve_in_basis(self.basis, vec) is not None

    def __repr__(self):
        return f"IdealLattice(d={self.ring.num_generators}, N={self.ring.degree}, rank={self.rank})"

    def to_json(self):
        return [
            {"".join(map(str, m)) or "1": c for m, c in self.ring.element(row).items()}
            for row in self.basis
        ]


def _closure(R, seeds, left=False):
    """Z-span of ``seeds`` closed under right (and optionally left) X_i-multiplication."""
    basis = {}
    queue = list(seeds)
    n = R.dim
    while queue:
        v = queue.pop()
        if not any(v):
            continue
        if _reduce_membership(basis, v, n):
            continue
        _insert(basis, list(v), n)
        for i in range(R.num_generators):
            queue.append(R.right_times(v, i))
            if left:
                queue.append(R.left_times(v, i))
    return IdealLattice(R, basis.values())


def _reduce_membership(basis, v, n):
    v = list(v)
    for j in range(n):
        if v[j] == 0:
            continue
        b = basis.get(j)
        if b is None:
            return False
        q, r = divmod(v[j], b[j])
        if r:
            return False
        for t in range(j, n):
            v[t] -= q * b[t]
    return True


def _letter_generators(letter, P, R):
    if letter == "f":
        return [R.vector({(i,): 1}) for i in range(R.num_generators)]
    gens = []
    for rel in P.relators:
        e = embed(rel, R)
        e[()] = e.get((), 0) - 1
        gens.append(R.vector(e))
    return gens


def fr_ideal(word, P, R):
    """Image in ``R`` of the monomial ideal spelled by ``word``."""
    check_word(word)
    if R.degree < len(word):
        raise DegreeTooSmall(f"truncation degree {R.degree} < word length {len(word)}")
    if P.num_generators != R.num_generators:
        raise AmbientMismatch("presentation and ring have different generator counts")
    L = _closure(R, _letter_generators(word[0], P, R), left=True)
    for letter in word[1:]:
        gens = _letter_generators(letter, P, R)
        seeds = [_mul_vec(R, a, g) for a in L.basis for g in gens]
        L = _closure(R, seeds)
    return L


def _mul_vec(R, a, b):
    return R.vector(R.mul(R.element(a), R.element(b)))


def sentence_ideal(words, P, R):
    return lattice_sum(*[fr_ideal(w, P, R) for w in words])


def _same_ring(*lats):
    rings = {L.ring for L in lats}
    if len(rings) != 1:
        raise AmbientMismatch("lattices live in different truncated rings")
    return rings.pop()


def lattice_sum(*lats):
    R = _same_ring(*lats)
    return IdealLattice(R, [row for L in lats for row in L.basis])


def lattice_intersect(A, B):
    R = _same_ring(A, B)
    if not A.basis or not B.basis:
        return IdealLattice(R)
    cols = A.basis + [[-x for x in row] for row in B.basis]
    M = IntMatrix.from_columns(cols, R.dim)
    ra = len(A.basis)
    out = []
    for k in kernel_basis(M):
        alpha = k[:ra]
        v = [0] * R.dim
        for c, row in zip(alpha, A.basis):
            if c:
                for t, x in enumerate(row):
                    v[t] += c * x
        out.append(v)
    return IdealLattice(R, out)


def lattice_contains(A, B):
    """True when B is a sublattice of A."""
    _same_ring(A, B)
    return all(row in A for row in B.basis)


def quotient_abgroup(A, B):
    _same_ring(A, B)
    if not lattice_contains(A, B):
        raise NotSubLattice("denominator is not inside the numerator")
    return subquotient(A.basis, B.basis, A.ring.dim)


def augmentation_power(R, k):
    """Image of ``f^k``: all monomials of degree >= k."""
    return IdealLattice(R, [R.vector({m: 1}) for m in R.monomials if len(m) >= k])


# ---------------------------------------------------------------------------
# Containment and stabilization sweeps


def magnus_contains(w, v, P, N):
    """Is the image of ideal(w) inside the image of ideal(v) in Z[F]/f^N?"""
    R = TruncRing(P.num_generators, N)
    return lattice_contains(fr_ideal(v, P, R), fr_ideal(w, P, R))


@dataclass
class StableQuotient:
    values: dict            # N -> AbGroup
    stable: bool
    value: AbGroup = None   # common value of the last three N when stable

    def to_json(self):
        return {
            "values": {str(N): g.to_json() for N, g in self.values.items()},
            "stable": self.stable,
            "value": self.value.to_json() if self.value is not None else None,
        }


def stabilize(compute, degrees):
    """Evaluate ``compute(N)`` over ascending ``degrees``; stable = last three agree."""
    values = {N: compute(N) for N in sorted(degrees)}
    vals = list(values.values())
    stable = len(vals) >= 3 and vals[-1] == vals[-2] == vals[-3]
    return StableQuotient(values, stable, vals[-1] if stable else None)


def generation_quotient(gen_i, gen_next, P, degrees):
    """(intersection of ideals of gen_i) / (sum of ideals of gen_next), swept over N."""

    def compute(N):
        R = TruncRing(P.num_generators, N)
        lats = [fr_ideal(w, P, R) for w in gen_i]
        inter = lats[0]
        for L in lats[1:]:
            inter = lattice_intersect(inter, L)
        denom = sentence_ideal(gen_next, P, R)
        return quotient_abgroup(inter, denom)

    return stabilize(compute, degrees)


def aug_quotient_via_magnus(P, n):
    """``g / g^n = f / (r + f^n)``: exact in Z[F]/f^n, no tail effects."""
    R = TruncRing(P.num_generators, n)
    f = augmentation_power(R, 1)
    r = fr_ideal("r", P, R)
    return quotient_abgroup(f, r)


def aug_graded_via_magnus(P, k):
    """``g^k / g^(k+1) = (f^k + r) / (f^(k+1) + r)``, exact in Z[F]/f^(k+1)."""
    R = TruncRing(P.num_generators, k + 1)
    r = fr_ideal("r", P, R)
    top = lattice_sum(augmentation_power(R, k), r)
    bottom = lattice_sum(augmentation_power(R, k + 1), r)
    return quotient_abgroup(top, bottom)


# ---------------------------------------------------------------------------
# Checking published game rows against the oracle


class _IdealCache:
    def __init__(self, P):
        self.P = P
        self.rings = {}
        self.ideals = {}

    def ideal(self, w, N):
        key = (w, N)
        if key not in self.ideals:
            R = self.rings.setdefault(N, TruncRing(self.P.num_generators, N))
            self.ideals[key] = fr_ideal(w, self.P, R)
        return self.ideals[key]

    def contains(self, w, v, N):
        return lattice_contains(self.ideal(v, N), self.ideal(w, N))


def containment_evidence(w, v, cache, max_degree=7):
    """Magnus test of ideal(w) inside ideal(v) at every N from the word lengths up to max_degree.

    A failure at some N certifies non-containment; success everywhere is
    consistent with containment.
    """
    lo = len(w) + 1  # below this the image of ideal(w) is zero
    results = {N: cache.contains(w, v, N) for N in range(max(lo, len(v)), max_degree + 1)}
    witness = next((N for N, ok in results.items() if not ok), None)
    return {"inside": witness is None, "witness_N": witness,
            "checked_N": sorted(results), "informative": bool(results)}


def _explain_missing(w, prev, ours, cache, max_degree):
    """Why a published word is absent from the recomputed generation."""
    from .frlang import word_contains

    for a in prev:
        if not word_contains(w, a):
            ev = containment_evidence(w, a, cache, max_degree)
            return {"word": w, "reason": f"not inside ideal({a})", "evidence": ev,
                    "certified": ev["witness_N"] is not None}
    for u in ours:
        if u != w and word_contains(w, u):
            ev_in = containment_evidence(w, u, cache, max_degree)
            ev_out = containment_evidence(u, w, cache, max_degree)
            return {"word": w, "reason": f"strictly inside ideal({u}), so not maximal",
                    "evidence": {"inside": ev_in, "reverse": ev_out},
                    "certified": ev_in["informative"] and ev_in["inside"]
                    and ev_out["witness_N"] is not None}
    return {"word": w, "reason": "unexplained", "evidence": None, "certified": False}


def _explain_extra(w, prev, published, cache, max_degree):
    """Why a recomputed word belongs to the generation but is not covered by the published row."""
    inside = {a: containment_evidence(w, a, cache, max_degree) for a in prev}
    outside = {p: containment_evidence(w, p, cache, max_degree) for p in published}
    certified = all(e["informative"] and e["inside"] for e in inside.values()) and all(
        e["witness_N"] is not None for e in outside.values())
    return {"word": w,
            "reason": "lies in every ideal of the previous generation and in no published ideal",
            "evidence": {"in_previous": inside, "not_in_published": outside},
            "certified": certified}


def game_report(origin, published, P, max_degree=7):
    """Compare recomputed generations with a published table column.

    For every generation two comparisons are made: along the recomputed chain,
    and one step from the published previous row.  Every discrepancy carries
    Magnus containment evidence over ``P`` at truncation degrees up to
    ``max_degree``.
    """
    from .frlang import game, game_step, normalize

    cache = _IdealCache(P)
    gens = game(origin, len(published))
    rows = []
    for k in range(1, len(published)):
        pub = normalize(published[k])
        entry = {"generation": k + 1, "published": list(pub)}
        for mode, prev, ours in (
            ("chain", gens[k - 1], gens[k]),
            ("from_published", normalize(published[k - 1]), game_step(published[k - 1])),
        ):
            missing = [w for w in pub if w not in ours]
            extra = [w for w in ours if w not in pub]
            entry[mode] = {
                "computed": list(ours),
                "match": not missing and not extra,
                "missing": [_explain_missing(w, prev, ours, cache, max_degree) for w in missing],
                "extra": [_explain_extra(w, prev, pub, cache, max_degree) for w in extra],
            }
        rows.append(entry)
    return {"origin": list(origin), "presentation": P.to_json(),
            "max_degree": max_degree, "generations": rows}
