"""Higher limits of representations of finite categories.

Cochains of degree p are indexed by composable chains
``c0 -f1-> c1 -> ... -fp-> cp`` and take values in ``F(cp)``; the coboundary
pushes the last face forward along ``F(fp)``.  With this variance ``H^0`` is
the limit.  Nerve cohomology is computed separately from the integral chain
complex of the nerve.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .exactalg import (
    ChainComplex,
    IntMatrix,
    Presented,
    TRIVIAL,
    block_diagonal,
    direct_sum,
    hermite_rows,
    homology,
    kernel_basis,
    solve_in_basis,
    subquotient,
)


class NotStronglyConnected(ValueError):
    pass


class CategoryError(ValueError):
    pass


class FiniteCategory:
    """Objects, named morphisms with dom/cod, and a composition table.

    ``compose[(g, f)]`` is ``g o f`` (apply f first) for every composable pair.
    """

    def __init__(self, objects, morphisms, compose, identities, check=True):
        self.objects = list(objects)
        self.morphisms = list(morphisms)  # (name, dom, cod)
        self.dom = {m: d for m, d, _ in self.morphisms}
        self.cod = {m: c for m, _, c in self.morphisms}
        self.compose = dict(compose)
        self.identities = dict(identities)
        self.names = [m for m, _, _ in self.morphisms]
        self.out = {c: [m for m in self.names if self.dom[m] == c] for c in self.objects}
        if check:
            self._check()

    def _check(self):
        for c in self.objects:
            e = self.identities[c]
            if self.dom[e] != c or self.cod[e] != c:
                raise CategoryError(f"identity of {c} has the wrong ends")
        for f in self.names:
            for g in self.out[self.cod[f]]:
                h = self.compose.get((g, f))
                if h is None:
                    raise CategoryError(f"missing composite {g} o {f}")
                if self.dom[h] != self.dom[f] or self.cod[h] != self.cod[g]:
                    raise CategoryError(f"composite {g} o {f} has the wrong ends")
            if self.compose[(self.identities[self.cod[f]], f)] != f:
                raise CategoryError(f"left unit fails at {f}")
            if self.compose[(f, self.identities[self.dom[f]])] != f:
                raise CategoryError(f"right unit fails at {f}")
        for f in self.names:
            for g in self.out[self.cod[f]]:
                for h in self.out[self.cod[g]]:
                    a = self.compose[(h, self.compose[(g, f)])]
                    b = self.compose[(self.compose[(h, g)], f)]
                    if a != b:
                        raise CategoryError(f"composition is not associative at {h}, {g}, {f}")

    def hom(self, a, b):
        return [m for m in self.out[a] if self.cod[m] == b]

    def is_identity(self, m):
        return self.identities[self.dom[m]] == m

    def strongly_connected(self):
        return all(self.hom(a, b) for a in self.objects for b in self.objects)

    def chains(self, p, normalized=False):
        """Composable p-chains ``(f1, ..., fp)``; 0-chains are the objects."""
        if p == 0:
            return [(c,) for c in self.objects]
        usable = [m for m in self.names if not (normalized and self.is_identity(m))]
        out = [(m,) for m in usable]
        for _ in range(p - 1):
            out = [ch + (g,) for ch in out for g in self.out[self.cod[ch[-1]]]
                   if not (normalized and self.is_identity(g))]
        return out

    def source(self, chain, p):
        return chain[0] if p == 0 else self.dom[chain[0]]

    def target(self, chain, p):
        return chain[0] if p == 0 else self.cod[chain[-1]]

    def face(self, chain, p, i):
        """``d_i`` of a p-chain (p >= 1), as a (p-1)-chain."""
        if p == 1:
            return (self.cod[chain[0]],) if i == 0 else (self.dom[chain[0]],)
        if i == 0:
            return chain[1:]
        if i == p:
            return chain[:-1]
        return chain[: i - 1] + (self.compose[(chain[i], chain[i - 1])],) + chain[i + 1:]

    def is_degenerate(self, chain, p):
        return p > 0 and any(self.is_identity(m) for m in chain)

    # -- constructors -------------------------------------------------------

    @classmethod
    def poset(cls, elements, leq):
        elements = list(elements)
        morphisms = [((a, b), a, b) for a in elements for b in elements if leq(a, b)]
        compose = {}
        for (f, a, b) in morphisms:
            for (g, b2, c) in morphisms:
                if b2 == b:
                    compose[(g, f)] = (a, c)
        return cls(elements, morphisms, compose, {a: (a, a) for a in elements})

    @classmethod
    def group(cls, elements, mul, identity, obj="*"):
        """One-object category; ``mul(g, h)`` is the composite ``g o h``."""
        elements = list(elements)
        morphisms = [(g, obj, obj) for g in elements]
        compose = {(g, h): mul(g, h) for g in elements for h in elements}
        return cls([obj], morphisms, compose, {obj: identity})

    @classmethod
    def cyclic_group(cls, m):
        return cls.group(range(m), lambda a, b: (a + b) % m, 0)

    @classmethod
    def groupoid(cls, elements, mul, identity, num_objects):
        """Connected groupoid on ``num_objects`` objects with vertex group G."""
        objs = list(range(num_objects))
        morphisms = [((i, g, j), i, j) for i in objs for j in objs for g in elements]
        compose = {}
        for (f, i, j) in morphisms:
            for (g, j2, k) in morphisms:
                if j2 == j:
                    compose[(g, f)] = (i, mul(g[1], f[1]), k)
        return cls(objs, morphisms, compose, {i: (i, identity, i) for i in objs})

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        morphisms = [(m["name"], m["dom"], m["cod"]) for m in obj["morphisms"]]
        compose = {}
        for entry in obj["compose"]:
            g, f, h = entry
            compose[(g, f)] = h
        return cls(obj["objects"], morphisms, compose, obj["identities"])

    def to_json(self):
        return {
            "objects": self.objects,
            "morphisms": [{"name": m, "dom": d, "cod": c} for m, d, c in self.morphisms],
            "identities": self.identities,
            "compose": [[g, f, h] for (g, f), h in self.compose.items()],
        }


@dataclass
class Representation:
    """Functor C -> Ab: a presented group per object and an integer matrix per morphism."""

    category: FiniteCategory
    values: dict   # object -> Presented
    maps: dict     # morphism -> IntMatrix (rank cod x rank dom)

    def __post_init__(self):
        C = self.category
        for m in C.names:
            M = self.maps[m]
            if M.shape != (self.values[C.cod[m]].rank, self.values[C.dom[m]].rank):
                raise CategoryError(f"matrix of {m} has the wrong shape")
            src = self.values[C.dom[m]].relations
            if src.cols and not _congruent(M @ src, IntMatrix.zeros(M.rows, src.cols),
                                           self.values[C.cod[m]]):
                raise CategoryError(f"matrix of {m} does not respect the relations")
        for c in C.objects:
            if not _congruent(self.maps[C.identities[c]], IntMatrix.identity(self.values[c].rank),
                              self.values[c]):
                raise CategoryError(f"identity of {c} is not sent to the identity")
        for f in C.names:
            for g in C.out[C.cod[f]]:
                h = C.compose[(g, f)]
                if not _congruent(self.maps[h], self.maps[g] @ self.maps[f], self.values[C.cod[g]]):
                    raise CategoryError(f"functoriality fails at {g} o {f}")

    @classmethod
    def constant(cls, C, A):
        pres = Presented(len(A.cyclic_orders()), A.presentation())
        I = IntMatrix.identity(pres.rank)
        return cls(C, {c: pres for c in C.objects}, {m: I for m in C.names})

    @classmethod
    def from_json(cls, C, obj):
        values = {}
        for c in C.objects:
            v = obj["values"][str(c)]
            rank = v["rank"]
            rel = v.get("relations") or []  # rank rows, one column per relation
            cols = len(rel[0]) if rel else 0
            rel = IntMatrix(rel, rank, cols) if cols else IntMatrix.zeros(rank, 0)
            values[c] = Presented(rank, rel)
        maps = {}
        for m in C.names:
            rows = values[C.cod[m]].rank
            cols = values[C.dom[m]].rank
            maps[m] = IntMatrix(obj["maps"][str(m)], rows, cols)
        return cls(C, values, maps)


def _congruent(A, B, target):
    """A == B modulo the relations of the target module, column by column."""
    D = A - B
    if D.is_zero():
        return True
    if target.relations.cols == 0:
        return False
    basis = hermite_rows(target.relations.columns(), target.rank)
    return all(solve_in_basis(basis, col) is not None for col in D.columns())


# ---------------------------------------------------------------------------
# Cochain complexes


def _cochain_complex(rep, D, normalized=False):
    """Cochains in degrees 0..D as a ChainComplex in degrees -D..0."""
    C = rep.category
    chains = [C.chains(p, normalized) for p in range(D + 1)]
    modules = []
    offsets = []
    for p in range(D + 1):
        pres = [rep.values[C.target(ch, p)] for ch in chains[p]]
        off, o = {}, 0
        for ch, pr in zip(chains[p], pres):
            off[ch] = o
            o += pr.rank
        offsets.append(off)
        rel = block_diagonal([pr.relations for pr in pres]) if pres else IntMatrix.zeros(0, 0)
        modules.append(Presented(o, rel))
    deltas = []
    for p in range(D):
        rows, cols = modules[p + 1].rank, modules[p].rank
        M = [[0] * cols for _ in range(rows)]
        q = p + 1
        for sigma in chains[q]:
            r0 = offsets[q][sigma]
            tgt = rep.values[C.target(sigma, q)].rank
            for i in range(q + 1):
                face = C.face(sigma, q, i)
                if normalized and C.is_degenerate(face, p):
                    continue
                c0 = offsets[p][face]
                sign = -1 if i % 2 else 1
                if i == q:
                    block = rep.maps[sigma[-1]]
                else:
                    block = IntMatrix.identity(tgt)
                for a in range(block.rows):
                    for b in range(block.cols):
                        if block[a, b]:
                            M[r0 + a][c0 + b] += sign * block[a, b]
        deltas.append(IntMatrix(M, rows, cols))
    # Reindex: chain degree -p holds cochain degree p.
    mods = list(reversed(modules))
    ds = list(reversed(deltas))
    return ChainComplex(mods, ds, bottom_degree=-D, check=False)


def higher_lim(rep, n, D=None, normalized=False):
    """``lim^n`` of a representation via the cochain complex truncated at D."""
    D = n + 2 if D is None else D
    if D < n + 1:
        raise ValueError("truncation must reach degree n + 1")
    if n < 0:
        return TRIVIAL
    return homology(_cochain_complex(rep, D, normalized), -n)


def nerve_chain_complex(C, D, normalized=False):
    """Integral chains of the nerve, degrees 0..D, with ``d = sum (-1)^i d_i``."""
    chains = [C.chains(p, normalized) for p in range(D + 1)]
    index = [{ch: k for k, ch in enumerate(cs)} for cs in chains]
    mats = []
    for p in range(1, D + 1):
        M = [[0] * len(chains[p]) for _ in range(len(chains[p - 1]))]
        for s, sigma in enumerate(chains[p]):
            for i in range(p + 1):
                face = C.face(sigma, p, i)
                if normalized and C.is_degenerate(face, p - 1):
                    continue
                M[index[p - 1][face]][s] += -1 if i % 2 else 1
        mats.append(IntMatrix(M, len(chains[p - 1]), len(chains[p])))
    return ChainComplex([len(c) for c in chains], mats)


def nerve_cohomology(C, A, n, D=None, normalized=False):
    """``H^n(Hom(C_*(NC), A))`` from the transposed nerve boundary maps."""
    D = n + 2 if D is None else D
    if n < 0:
        return TRIVIAL
    K = nerve_chain_complex(C, D, normalized)
    parts = []
    for order in A.cyclic_orders():
        mods, ds = [], []
        for p in range(D + 1):
            r = K.module(p).rank
            rel = IntMatrix.diagonal([order] * r) if order else IntMatrix.zeros(r, 0)
            mods.append(Presented(r, rel))
        for p in range(D):
            ds.append(K.differential(p + 1).transpose())
        cochain = ChainComplex(list(reversed(mods)), list(reversed(ds)), -D, check=False)
        parts.append(homology(cochain, -n))
    return direct_sum(parts) if parts else TRIVIAL


def nerve_homology(C, n, D=None):
    D = n + 2 if D is None else D
    return homology(nerve_chain_complex(C, D), n)


# ---------------------------------------------------------------------------
# Limits directly


def _subgroup_where(maps_and_targets, source):
    """``{x in source : M x = 0 in target for every (M, target)} / relations``."""
    blocks = []
    rows = 0
    for M, tgt in maps_and_targets:
        blocks.append((M, tgt))
        rows += M.rows
    if not blocks:
        return source.group()
    # Stack [M_1 Q_1 0 ...; M_2 0 Q_2 ...] and keep the source coordinates of its kernel.
    stacked = []
    width_q = sum(t.relations.cols for _, t in blocks)
    qoff = 0
    for M, tgt in blocks:
        for a in range(M.rows):
            row = list(M.entries[a]) + [0] * width_q
            for b in range(tgt.relations.cols):
                row[source.rank + qoff + b] = tgt.relations[a, b]
            stacked.append(row)
        qoff += tgt.relations.cols
    K = IntMatrix(stacked, rows, source.rank + width_q)
    cycles = [v[: source.rank] for v in kernel_basis(K)]
    basis = hermite_rows(cycles, source.rank)
    rel = [c for c in source.relations.columns() if any(c)]
    return subquotient(basis, rel, source.rank)


def lim_invariants(rep, obj=None):
    """``lim`` over a strongly connected category as invariants at one object."""
    C = rep.category
    if not C.strongly_connected():
        raise NotStronglyConnected("some hom-set is empty")
    c0 = C.objects[0] if obj is None else obj
    conds = []
    out = C.out[c0]
    for f1, f2 in itertools.combinations(out, 2):
        if C.cod[f1] == C.cod[f2]:
            conds.append((rep.maps[f1] - rep.maps[f2], rep.values[C.cod[f1]]))
    return _subgroup_where(conds, rep.values[c0])


def equalizer_limit(rep):
    """Compatible families ``(x_c)`` with ``F(a) x_dom = x_cod`` for every morphism."""
    C = rep.category
    offs, o = {}, 0
    for c in C.objects:
        offs[c] = o
        o += rep.values[c].rank
    total_rel = block_diagonal([rep.values[c].relations for c in C.objects])
    source = Presented(o, total_rel)
    conds = []
    for m in C.names:
        a, b = C.dom[m], C.cod[m]
        tgt = rep.values[b]
        M = [[0] * o for _ in range(tgt.rank)]
        F = rep.maps[m]
        for i in range(tgt.rank):
            for j in range(F.cols):
                M[i][offs[a] + j] += F[i, j]
            M[i][offs[b] + i] -= 1
        conds.append((IntMatrix(M, tgt.rank, o), tgt))
    return _subgroup_where(conds, source)


# ---------------------------------------------------------------------------
# Coproduct projections


def coproduct(C, a, b):
    """``(a + b, i1, i2)`` found by checking the universal property, or ``None``."""
    for s in C.objects:
        for i1 in C.hom(a, s):
            for i2 in C.hom(b, s):
                if all(_unique_factor(C, s, i1, i2, f1, f2, t)
                       for t in C.objects for f1 in C.hom(a, t) for f2 in C.hom(b, t)):
                    return s, i1, i2
    return None


def _unique_factor(C, s, i1, i2, f1, f2, t):
    hits = [h for h in C.hom(s, t) if C.compose[(h, i1)] == f1 and C.compose[(h, i2)] == f2]
    return len(hits) == 1


def square_functor(C):
    """``c -> c + c`` on objects and morphisms, plus the two injections."""
    sq, inj = {}, {}
    for c in C.objects:
        cp = coproduct(C, c, c)
        if cp is None:
            raise CategoryError(f"{c} + {c} does not exist")
        sq[c] = cp[0]
        inj[c] = (cp[1], cp[2])
    sq_m = {}
    for f in C.names:
        a, b = C.dom[f], C.cod[f]
        want1 = C.compose[(inj[b][0], f)]
        want2 = C.compose[(inj[b][1], f)]
        h = [h for h in C.hom(sq[a], sq[b])
             if C.compose[(h, inj[a][0])] == want1 and C.compose[(h, inj[a][1])] == want2]
        sq_m[f] = h[0]
    return sq, sq_m, inj


def compose_with(rep, obj_map, mor_map):
    C = rep.category
    return Representation(
        C,
        {c: rep.values[obj_map[c]] for c in C.objects},
        {m: rep.maps[mor_map[m]] for m in C.names},
    )


def induced_map_is_iso(rep, target_rep, eta, n, D=None):
    """Does the natural map ``eta: rep -> target_rep`` induce isos on ``lim^p``, p <= n?

    Decided exactly: the mapping cone of the cochain map must be acyclic in
    degrees ``-1..n``.
    """
    D = n + 3 if D is None else D
    A = _cochain_complex(rep, D)
    B = _cochain_complex(target_rep, D)
    C = rep.category
    # Cochain map degree p: block diagonal over chains of eta at the chain's target.
    phis = []
    for p in range(D + 1):
        blocks = [eta[C.target(ch, p)] for ch in C.chains(p)]
        phis.append(block_diagonal(blocks) if blocks else IntMatrix.zeros(0, 0))

    def cochain_mod(X, p):
        return X.module(-p)

    def delta(X, p):
        # cochain differential p -> p+1 is the chain differential at degree -p
        return X.differential(-p)

    # Cone^p = A^{p+1} + B^p with d(a, b) = (-dA a, phi a + dB b); p = -1..D-1.
    mods, ds = [], []
    for p in range(-1, D):
        a = cochain_mod(A, p + 1)
        b = cochain_mod(B, p) if p >= 0 else Presented(0)
        mods.append(Presented(a.rank + b.rank, block_diagonal([a.relations, b.relations])))
    for p in range(-1, D - 1):
        b_src = cochain_mod(B, p).rank if p >= 0 else 0
        a_dst = cochain_mod(A, p + 2).rank
        b_dst = cochain_mod(B, p + 1).rank
        top = (-delta(A, p + 1)).hstack(IntMatrix.zeros(a_dst, b_src))
        bottom_left = phis[p + 1]
        bottom_right = delta(B, p) if p >= 0 else IntMatrix.zeros(b_dst, 0)
        ds.append(top.vstack(bottom_left.hstack(bottom_right)))
    cone = ChainComplex(list(reversed(mods)), list(reversed(ds)), bottom_degree=-(D - 1),
                        check=False)
    return all(homology(cone, -p).is_trivial for p in range(-1, n + 1))


def coproduct_projection_isos(rep, n):
    """Check that both injections ``c -> c + c`` induce isomorphisms on ``lim^p``, p <= n."""
    C = rep.category
    sq, sq_m, inj = square_functor(C)
    target = compose_with(rep, sq, sq_m)
    results = []
    for k in (0, 1):
        eta = {c: rep.maps[inj[c][k]] for c in C.objects}
        results.append(induced_map_is_iso(rep, target, eta, n))
    return tuple(results)
