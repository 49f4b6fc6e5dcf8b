"""Gruenberg resolution of Z over ZG and group homology with trivial coefficients.

Degree ``2n`` is ``r^n / r^(n+1)`` with basis ``(y_j1 - 1)...(y_jn - 1)`` and
degree ``2n+1`` is ``f r^n / f r^(n+1)`` with basis ``(x_i - 1)(y_j1 - 1)...``.
All modules are right ZG-modules.  Elements of ZG are dicts ``coset -> int``.

Left multiplication by a group element ``g`` on ``r^k / r^(k+1)`` only sees
the conjugation action of G on ``R_ab`` in each factor, which is what makes
both differentials computable from Schreier rewriting alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .exactalg import (
    AbGroup,
    ChainComplex,
    IntMatrix,
    Presented,
    TRIVIAL,
    direct_sum,
    hermite_rows,
    homology,
    kernel_basis,
    solve_in_basis,
)
from .freegrp import (
    FreeWord,
    GroupRingElement,
    NotInSubgroup,
    rewrite_in_R,
    right_fox_derivative,
    schreier_data,
    todd_coxeter,
)


class DegreeTooLarge(MemoryError):
    pass


class NotInIdeal(ValueError):
    pass


DEFAULT_BASIS_CAP = 20_000


# ---------------------------------------------------------------------------
# ZG arithmetic through the regular representation


class FiniteGroup:
    """Multiplication on cosets of a complete coset table (coset 0 = identity)."""

    def __init__(self, schreier):
        self.schreier = schreier
        T = schreier.table
        self.order = T.num_cosets
        trans = schreier.transversal
        self.mul = [[T.act(a, trans[b]) for b in range(self.order)] for a in range(self.order)]
        self.inv = [next(b for b in range(self.order) if self.mul[a][b] == 0)
                    for a in range(self.order)]

    def coset(self, w):
        return self.schreier.table.act(0, w)

    def zg_mul(self, a, b):
        out = {}
        mul = self.mul
        for g, x in a.items():
            row = mul[g]
            for h, y in b.items():
                k = row[h]
                out[k] = out.get(k, 0) + x * y
        return {k: v for k, v in out.items() if v}

    def zg_image(self, e):
        """Project a GroupRingElement of Z[F] to ZG."""
        out = {}
        for w, c in e.terms.items():
            k = self.coset(w)
            out[k] = out.get(k, 0) + c
        return {k: v for k, v in out.items() if v}


def _add_into(target, key, zg):
    cur = target.setdefault(key, {})
    for g, c in zg.items():
        v = cur.get(g, 0) + c
        if v:
            cur[g] = v
        else:
            cur.pop(g, None)
    if not cur:
        del target[key]


# ---------------------------------------------------------------------------
# Elements of r in the Schreier basis


def telescope(indices, rank):
    """Right Fox expansion over the free group R: ``z - 1 = sum_a (y_a - 1) c_a``.

    ``indices`` spells ``z`` as signed 1-based basis letters; returns
    ``{a: {tuple_of_letters: coefficient}}`` with the coefficients as words in
    the ``y``-letters (to be expanded by the caller).
    """
    out = {}
    L = tuple(indices)
    for k, a in enumerate(L):
        j = abs(a) - 1
        if a > 0:
            suffix, sign = L[k + 1:], 1
        else:
            suffix, sign = L[k:], -1
        d = out.setdefault(j, {})
        d[suffix] = d.get(suffix, 0) + sign
    return out


def express_in_r_basis(e, S):
    """Coefficients ``c_j`` with ``e = sum_j (y_j - 1) c_j`` in Z[F].

    ``e`` must lie in r: every term ``n g`` is split as ``t (s - 1) + ...``
    by writing ``g = s' t`` with ``s'`` in R, conjugating through the
    transversal and telescoping over the Schreier basis.
    """
    from .freegrp import expand_rewrite

    T = S.table
    out = {}
    # Group terms by coset; each coset's coefficients must sum to zero.
    by_coset = {}
    for w, c in e.terms.items():
        by_coset.setdefault(T.act(0, w), []).append((w, c))
    for cos, terms in by_coset.items():
        if sum(c for _, c in terms) != 0:
            raise NotInIdeal("element does not lie in the relation ideal")
        t = S.transversal[cos]
        # n w = n (w t^-1 - 1) t + n t, and the t-terms cancel.
        for w, c in terms:
            s = w * t.inverse()
            if not s:
                continue
            try:
                idx = rewrite_in_R(s, S)
            except NotInSubgroup as exc:  # pragma: no cover - guarded by the coset test
                raise NotInIdeal(str(exc)) from exc
            for j, coeffs in telescope(idx, S.rank).items():
                acc = out.setdefault(j, GroupRingElement())
                for suffix, k in coeffs.items():
                    acc = acc + GroupRingElement.of(expand_rewrite(suffix, S) * t, c * k)
                out[j] = acc
    return {j: v for j, v in out.items() if v}


# ---------------------------------------------------------------------------
# The resolution


@dataclass
class GruenbergResolution:
    presentation: object
    table: object
    schreier: object
    group: FiniteGroup
    max_degree: int
    bases: list          # per degree: list of labels
    differentials: list  # differentials[k] : C_k -> C_{k-1}, k >= 1; index 0 unused

    def rank(self, k):
        return len(self.bases[k])

    def tensor_trivial(self):
        """``C (x)_ZG Z`` as an integer chain complex (every coset sent to 1)."""
        mats = []
        for k in range(1, self.max_degree + 1):
            rows, cols = self.rank(k - 1), self.rank(k)
            M = [[0] * cols for _ in range(rows)]
            for s, col in enumerate(self.differentials[k]):
                for t, zg in col.items():
                    M[t][s] += sum(zg.values())
            mats.append(IntMatrix(M, rows, cols))
        return ChainComplex([self.rank(k) for k in range(self.max_degree + 1)], mats,
                            check=False)

    def check_d_squared(self):
        mul = self.group.zg_mul
        for k in range(2, self.max_degree + 1):
            lower = self.differentials[k - 1]
            for s, col in enumerate(self.differentials[k]):
                acc = {}
                for t, c_ts in col.items():
                    for u, c_ut in lower[t].items():
                        _add_into(acc, u, mul(c_ut, c_ts))
                if acc:
                    raise AssertionError(f"d o d != 0 at degree {k}, column {s}")
        return True


class _Builder:
    def __init__(self, P, coset_bound):
        self.P = P
        self.T = todd_coxeter(P, coset_bound)
        self.S = schreier_data(P, self.T)
        self.G = FiniteGroup(self.S)
        self.d = P.num_generators
        self.m = self.S.rank
        # R_ab action: act[g][j] = exponent vector of t_g y_j t_g^-1.
        self._act = {}
        self.leftmul = lru_cache(maxsize=None)(self._leftmul)

    def action(self, g, j):
        key = (g, j)
        if key not in self._act:
            t = self.S.transversal[g]
            z = t * self.S.basis[j] * t.inverse()
            vec = {}
            for a in rewrite_in_R(z, self.S):
                b = abs(a) - 1
                vec[b] = vec.get(b, 0) + (1 if a > 0 else -1)
            self._act[key] = {b: v for b, v in vec.items() if v}
        return self._act[key]

    def _leftmul(self, g, J):
        """``t_g * P_J`` modulo ``r^(|J|+1)`` as ``{J': {coset: coeff}}``."""
        if not J:
            return {(): {g: 1}}
        factors = [list(self.action(g, j).items()) for j in J]
        out = {}
        for combo in itertools.product(*factors):
            c = 1
            for _, v in combo:
                c *= v
            out[tuple(a for a, _ in combo)] = {g: c}
        return out

    def build(self, N, cap):
        d, m = self.d, self.m
        bases = []
        for k in range(N + 1):
            n = k // 2
            size = m ** n * (d if k % 2 else 1)
            if size > cap:
                raise DegreeTooLarge(
                    f"degree {k} needs {size} basis elements (cap {cap})"
                )
            prods = list(itertools.product(range(m), repeat=n))
            if k % 2:
                bases.append([(i,) + J for i in range(d) for J in prods])
            else:
                bases.append(prods)
        index = [{lab: p for p, lab in enumerate(b)} for b in bases]
        diffs = [None]
        # Right Fox coefficients of the basis relators, projected to ZG.
        fox = [[self.G.zg_image(right_fox_derivative(y, i)) for i in range(d)]
               for y in self.S.basis]
        for k in range(1, N + 1):
            cols = []
            tgt = index[k - 1]
            if k % 2:
                # (x_i - 1) P_J  ->  x_i P_J - P_J
                for lab in bases[k]:
                    i, J = lab[0], lab[1:]
                    col = {}
                    g = self.G.coset(FreeWord.gen(i))
                    for Jp, zg in self.leftmul(g, J).items():
                        _add_into(col, tgt[Jp], zg)
                    _add_into(col, tgt[J], {0: -1})
                    cols.append(col)
            else:
                # (y_j - 1) Q  ->  sum_i (x_i - 1) D_i(y_j) Q
                for J in bases[k]:
                    j, rest = J[0], J[1:]
                    col = {}
                    for i in range(d):
                        for h, c in fox[j][i].items():
                            for Jp, zg in self.leftmul(h, rest).items():
                                _add_into(col, tgt[(i,) + Jp], {g: c * v for g, v in zg.items()})
                    cols.append(col)
            diffs.append(cols)
        return GruenbergResolution(self.P, self.T, self.S, self.G, N, bases, diffs)


def build_resolution(P, N, coset_bound=10_000, basis_cap=DEFAULT_BASIS_CAP, check=True):
    res = _Builder(P, coset_bound).build(N, basis_cap)
    if check:
        res.check_d_squared()
    return res


def _tensor_cyclic(C, m):
    """``C (x) Z/m`` for a free complex C, as a complex of presented modules."""
    if m == 0:
        return C
    mods = [Presented(M.rank, IntMatrix.diagonal([m] * M.rank)) for M in C.modules]
    return ChainComplex(mods, list(C.differentials), C.bottom_degree, check=False)


def homology_with_coefficients(C, n, A):
    """``H_n(C (x) A)`` for a free complex C, splitting A into cyclic summands."""
    if A.is_trivial:
        return TRIVIAL
    parts = []
    for order in A.cyclic_orders():
        parts.append(homology(_tensor_cyclic(C, order), n))
    return direct_sum(parts)


def group_homology(P, n, A=None, resolution=None, **kw):
    """``H_n(G, A)`` for trivial coefficients ``A`` (default Z)."""
    A = AbGroup(1) if A is None else A
    if n < 0:
        return TRIVIAL
    if resolution is None or resolution.max_degree < n + 1:
        resolution = build_resolution(P, n + 1, **kw)
    return homology_with_coefficients(resolution.tensor_trivial(), n, A)


# ---------------------------------------------------------------------------
# Independent route: a resolution built by lattice kernels in ZG^k


def lattice_resolution_complex(P, N, coset_bound=10_000):
    """Free ZG-resolution of Z built by brute-force kernel computations, tensored with Z.

    Each step takes the kernel of the previous differential as a Z-lattice
    inside ``ZG^k = Z^(k|G|)`` and picks ZG-generators greedily from its
    Hermite basis.  Shares nothing with the Gruenberg construction beyond the
    group's multiplication table.
    """
    S = schreier_data(P, todd_coxeter(P, coset_bound))
    G = FiniteGroup(S)
    n = G.order

    def right_translate(v, k, g):
        out = [0] * (k * n)
        for t in range(k):
            for h in range(n):
                c = v[t * n + h]
                if c:
                    out[t * n + G.mul[h][g]] += c
        return out

    # degree 0: ZG -> Z augmentation; generators of the kernel, and so on.
    ranks = [1]
    gens_by_degree = []
    current = IntMatrix([[1] * n], 1, n)  # Z-matrix of the previous map
    k_prev = 1
    for deg in range(1, N + 1):
        K = hermite_rows(kernel_basis(current), k_prev * n)
        gens = []
        span = []
        for v in K:
            if span and solve_in_basis(span, v) is not None:
                continue
            gens.append(v)
            span = hermite_rows(span + [right_translate(v, k_prev, g) for g in range(n)],
                                k_prev * n)
        gens_by_degree.append(gens)
        ranks.append(len(gens))
        cols = [right_translate(v, k_prev, g) for v in gens for g in range(n)]
        current = IntMatrix.from_columns(cols, k_prev * n)
        k_prev = len(gens)
    mats = []
    for deg, gens in enumerate(gens_by_degree, start=1):
        rows = ranks[deg - 1]
        M = [[0] * len(gens) for _ in range(rows)]
        for s, v in enumerate(gens):
            for t in range(rows):
                M[t][s] = sum(v[t * n:(t + 1) * n])
        mats.append(IntMatrix(M, rows, len(gens)))
    # Degree-0 term of the tensored complex is Z; the augmentation is dropped.
    return ChainComplex(ranks, mats, check=False)


def lattice_group_homology(P, n, coset_bound=10_000):
    return homology(lattice_resolution_complex(P, n + 1, coset_bound), n)


def periodic_cyclic_homology(m, n):
    """Closed form from the 2-periodic resolution of Z over Z[Z/m]."""
    if n == 0:
        return AbGroup(1)
    if n % 2:
        return AbGroup.cyclic(m)
    return TRIVIAL
