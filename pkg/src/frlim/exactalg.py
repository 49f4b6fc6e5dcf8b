"""Exact integer linear algebra and finitely generated abelian groups.

Everything here works over Python integers, so there is no overflow and no
modular shortcut anywhere.  Matrices act on column vectors: an ``m x n``
matrix is a map ``Z^n -> Z^m``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd


class ShapeMismatch(ValueError):
    pass


class IntMatrix:
    """Dense row-major integer matrix with an explicit shape.

    The shape is stored separately so that ``0 x n`` and ``n x 0`` matrices
    are representable; treat instances as immutable.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries, rows=None, cols=None):
        entries = [list(map(int, r)) for r in entries]
        if rows is None:
            rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ShapeMismatch(f"entries do not form a {rows}x{cols} matrix")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diagonal(cls, diag, rows=None, cols=None):
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        m = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            m[i][i] = d
        return cls(m, rows, cols)

    @classmethod
    def from_columns(cls, columns, rows):
        columns = list(columns)
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(map(tuple, self.entries))))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __repr__(self):
        return f"IntMatrix({self.entries!r}, rows={self.rows}, cols={self.cols})"

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        ot = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = []
        for row in self.entries:
            nz = [(k, a) for k, a in enumerate(row) if a]
            out.append([sum(a * col[k] for k, a in nz) for col in ot])
        return IntMatrix(out, self.rows, other.cols)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        return IntMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
            self.rows, self.cols,
        )

    def __neg__(self):
        return IntMatrix([[-a for a in r] for r in self.entries], self.rows, self.cols)

    def __sub__(self, other):
        return self + (-other)

    def transpose(self):
        return IntMatrix([list(c) for c in zip(*self.entries)] if self.rows else
                         [[] for _ in range(self.cols)], self.cols, self.rows)

    T = property(transpose)

    def column(self, j):
        return [r[j] for r in self.entries]

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self):
        return not any(any(r) for r in self.entries)

    def hstack(self, other):
        if self.rows != other.rows:
            raise ShapeMismatch("hstack needs equal row counts")
        return IntMatrix([r + s for r, s in zip(self.entries, other.entries)],
                         self.rows, self.cols + other.cols)

    def vstack(self, other):
        if self.cols != other.cols:
            raise ShapeMismatch("vstack needs equal column counts")
        return IntMatrix(self.entries + other.entries, self.rows + other.rows, self.cols)

    def kron(self, other):
        out = []
        for r in self.entries:
            for s in other.entries:
                out.append([a * b for a in r for b in s])
        return IntMatrix(out, self.rows * other.rows, self.cols * other.cols)

    def det(self):
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ShapeMismatch("determinant of a non-square matrix")
        n = self.rows
        a = [r[:] for r in self.entries]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def to_json(self):
        return [r[:] for r in self.entries]


def block_diagonal(blocks):
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = IntMatrix.zeros(rows, cols).entries
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.entries):
            out[r0 + i][c0:c0 + b.cols] = row
        r0 += b.rows
        c0 += b.cols
    return IntMatrix(out, rows, cols)


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(M):
    """Return ``(S, U, V)`` with ``U @ M @ V == S``.

    ``U`` and ``V`` are unimodular and ``S`` is diagonal with a nonnegative
    divisibility chain.  Pivots are chosen by minimal absolute value.
    """
    m, n = M.shape
    A = [r[:] for r in M.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = A[i]
                for j in range(t, n):
                    v = row[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(A[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        if A[t][t] == 0:
            break
    return IntMatrix(A, m, n), IntMatrix(U, m, m), IntMatrix(V, n, n)


def invariant_factors(diag):
    """Turn arbitrary diagonal entries into a divisibility chain (zeros last)."""
    nz = sorted(abs(d) for d in diag if d)
    zeros = sum(1 for d in diag if d == 0)
    for i in range(len(nz)):
        for j in range(i + 1, len(nz)):
            a, b = nz[i], nz[j]
            g = gcd(a, b)
            nz[i], nz[j] = g, a // g * b
    return nz + [0] * zeros


def smith_diagonal(M):
    """Nonzero invariant factors of ``M`` (with units), via sparse elimination.

    Much cheaper than :func:`smith_normal_form` on the large sparse
    differentials coming out of resolutions; no transforms are tracked.
    """
    if isinstance(M, IntMatrix):
        rows = [{j: v for j, v in enumerate(r) if v} for r in M.entries]
    else:
        rows = [dict(r) for r in M]
    rows = [r for r in rows if r]
    cols = {}
    for i, r in enumerate(rows):
        for j in r:
            cols.setdefault(j, set()).add(i)
    alive = set(range(len(rows)))
    diag = []

    def pick():
        best = None
        for i in alive:
            r = rows[i]
            lr = len(r)
            for j, v in r.items():
                a = abs(v)
                score = (a, (lr - 1) * (len(cols[j]) - 1))
                if best is None or score < best[0]:
                    best = (score, i, j)
                    if score == (1, 0):
                        return best
        return best

    while alive:
        best = pick()
        if best is None:
            break
        _, pi, pj = best
        while True:
            prow = rows[pi]
            p = prow[pj]
            changed = False
            for i in list(cols[pj]):
                if i == pi:
                    continue
                r = rows[i]
                q = r[pj] // p
                for j, v in prow.items():
                    nv = r.get(j, 0) - q * v
                    if nv:
                        if j not in r:
                            cols.setdefault(j, set()).add(i)
                        r[j] = nv
                    elif j in r:
                        del r[j]
                        cols[j].discard(i)
                if pj in r:
                    changed = True
                if not r:
                    alive.discard(i)
            # Column operations only touch the pivot row once its column is clear.
            if not changed:
                for j in list(prow):
                    if j == pj:
                        continue
                    nv = prow[j] - (prow[j] // p) * p
                    if nv:
                        prow[j] = nv
                        changed = True
                    else:
                        del prow[j]
                        cols[j].discard(pi)
            if not changed:
                break
            # Remainders left: move to the smallest entry touching the pivot cross.
            cand = [(abs(v), pi, j) for j, v in prow.items()]
            cand += [(abs(rows[i][pj]), i, pj) for i in cols[pj]]
            _, pi, pj = min(cand)
        diag.append(abs(rows[pi][pj]))
        for j in rows[pi]:
            cols[j].discard(pi)
        rows[pi] = {}
        alive.discard(pi)
    return invariant_factors(diag)


def rank(M):
    return len(smith_diagonal(M))


# ---------------------------------------------------------------------------
# Finitely generated abelian groups


@dataclass(frozen=True)
class AbGroup:
    """``Z^rank + Z/d1 + ... + Z/dk`` with ``d1 | d2 | ... | dk``, all ``>= 2``."""

    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        t = tuple(self.torsion)
        object.__setattr__(self, "torsion", t)
        if self.rank < 0:
            raise ValueError("negative free rank")
        if any(d < 2 for d in t) or any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"torsion {t} is not an invariant-factor chain")

    @classmethod
    def from_orders(cls, orders, rank=0):
        """Build from cyclic orders in any form; 0 means Z, 1 is dropped."""
        orders = list(orders)
        rank += sum(1 for d in orders if d == 0)
        chain = invariant_factors([d for d in orders if d])
        return cls(rank, tuple(d for d in chain if d > 1))

    @classmethod
    def free(cls, rank):
        return cls(rank)

    @classmethod
    def cyclic(cls, m):
        return cls.from_orders([m])

    @property
    def is_trivial(self):
        return self.rank == 0 and not self.torsion

    def cyclic_orders(self):
        """Orders of the cyclic summands, with 0 standing for Z."""
        return [0] * self.rank + list(self.torsion)

    def presentation(self):
        """Relation matrix whose cokernel is this group (generators = summands)."""
        k = self.rank + len(self.torsion)
        return IntMatrix.diagonal([0] * self.rank + list(self.torsion), k, k)

    def __add__(self, other):
        return AbGroup.from_orders(self.cyclic_orders() + other.cyclic_orders())

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj):
        return cls.from_orders(obj.get("torsion", []), obj.get("rank", 0))


TRIVIAL = AbGroup()
Z = AbGroup(1)


def direct_sum(groups):
    orders = []
    for g in groups:
        orders += g.cyclic_orders()
    return AbGroup.from_orders(orders)


def cokernel(M):
    """``Z^rows / image(M)`` in invariant-factor form."""
    diag = smith_diagonal(M)
    return AbGroup.from_orders(diag, rank=M.rows - len(diag))


def ab_tensor(A, B):
    orders = []
    for a in A.cyclic_orders():
        for b in B.cyclic_orders():
            orders.append(gcd(a, b))
    return AbGroup.from_orders(orders)


def ab_tor(A, B):
    orders = []
    for a in A.torsion:
        for b in B.torsion:
            orders.append(gcd(a, b))
    return AbGroup.from_orders(orders)


# ---------------------------------------------------------------------------
# Lattice helpers: kernels and subquotients


def hermite_rows(vectors, n):
    """Row-style Hermite form of the lattice spanned by ``vectors`` in Z^n.

    Returns a list of basis rows with strictly increasing pivot columns,
    positive pivots and entries above each pivot reduced into ``[0, pivot)``.
    """
    basis = {}  # pivot column -> row
    for v in vectors:
        v = list(v)
        _insert(basis, v, n)
    piv = sorted(basis)
    for k, j in enumerate(piv):
        row = basis[j]
        for j2 in piv[k + 1:]:
            other = basis[j2]
            q = row[j2] // other[j2]
            if q:
                for t in range(j2, n):
                    row[t] -= q * other[t]
    return [basis[j] for j in piv]


def _insert(basis, v, n):
    j = 0
    while True:
        while j < n and v[j] == 0:
            j += 1
        if j == n:
            return
        if j not in basis:
            if v[j] < 0:
                v = [-a for a in v]
            basis[j] = v
            return
        b = basis[j]
        a, c = b[j], v[j]
        if c % a == 0:
            q = c // a
            for t in range(j, n):
                v[t] -= q * b[t]
            continue
        # gcd step: replace the pivot row by the combination with pivot gcd(a, c)
        x, y, g = _xgcd(a, c)
        new_b = [x * p + y * q for p, q in zip(b, v)]
        new_v = [(c // g) * p - (a // g) * q for p, q in zip(b, v)]
        basis[j] = new_b
        v = new_v


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return x0, y0, a


def kernel_basis(M):
    """A Z-basis (list of column vectors) of ``{x : M x = 0}``."""
    m, n = M.shape
    # Column-reduce [M; I]: transpose and row-reduce with a tracked identity.
    aug = [M.column(j) + [int(i == j) for i in range(n)] for j in range(n)]
    basis = {}
    kernel = []
    for v in aug:
        j = _insert_tracked(basis, v, m)
        if j is not None:
            kernel.append(j)
    return [v[m:] for v in kernel]


def _insert_tracked(basis, v, m):
    # Like _insert but the pivot search is limited to the first m coordinates;
    # returns the reduced vector if it became zero there (a kernel element).
    j = 0
    while True:
        while j < m and v[j] == 0:
            j += 1
        if j == m:
            return v if any(v[m:]) else None
        if j not in basis:
            basis[j] = v
            return None
        b = basis[j]
        a, c = b[j], v[j]
        if c % a == 0:
            q = c // a
            v = [p - q * r for p, r in zip(v, b)]
            continue
        x, y, g = _xgcd(a, c)
        new_b = [x * p + y * q for p, q in zip(b, v)]
        new_v = [(c // g) * p - (a // g) * q for p, q in zip(b, v)]
        basis[j] = new_b
        v = new_v


def solve_in_basis(basis_rows, v):
    """Coordinates of ``v`` in a Hermite basis (rows), or ``None`` if not in the lattice."""
    v = list(v)
    coords = []
    for row in basis_rows:
        j = next(k for k, a in enumerate(row) if a)
        q, r = divmod(v[j], row[j])
        if r:
            return None
        coords.append(q)
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    if any(v):
        return None
    return coords


def subquotient(gens_a, gens_b, n):
    """``span(gens_a) / span(gens_b)`` for lattices in Z^n with b inside a."""
    basis = hermite_rows(gens_a, n)
    cols = []
    for v in gens_b:
        c = solve_in_basis(basis, v)
        if c is None:
            raise ValueError("second lattice is not contained in the first")
        cols.append(c)
    return cokernel(IntMatrix.from_columns(cols, len(basis)))


# ---------------------------------------------------------------------------
# Chain complexes


@dataclass(frozen=True)
class Presented:
    """The module ``Z^rank / image(relations)``; ``relations`` is ``rank x m``."""

    rank: int
    relations: IntMatrix = None

    def __post_init__(self):
        if self.relations is None:
            object.__setattr__(self, "relations", IntMatrix.zeros(self.rank, 0))
        if self.relations.rows != self.rank:
            raise ShapeMismatch("relation matrix rows must equal the generator count")

    @property
    def is_free(self):
        return self.relations.is_zero()

    def group(self):
        return cokernel(self.relations)


@dataclass(frozen=True)
class ChainComplex:
    """Bounded chain complex; ``differentials[k]`` maps degree ``bottom+k+1`` to ``bottom+k``.

    Modules may be free (a bare rank) or presented; differentials act on the
    generators and must carry relations into relations.
    """

    modules: list
    differentials: list
    bottom_degree: int = 0
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        mods = [m if isinstance(m, Presented) else Presented(int(m)) for m in self.modules]
        object.__setattr__(self, "modules", mods)
        if len(self.differentials) != max(len(mods) - 1, 0):
            raise ShapeMismatch("need one differential between each pair of modules")
        for k, d in enumerate(self.differentials):
            if d.shape != (mods[k].rank, mods[k + 1].rank):
                raise ShapeMismatch(
                    f"differential {k} has shape {d.shape}, expected "
                    f"{(mods[k].rank, mods[k + 1].rank)}"
                )
        if self.check:
            for k in range(len(self.differentials) - 1):
                if not (self.differentials[k] @ self.differentials[k + 1]).is_zero():
                    raise ValueError(f"d o d != 0 at degree {self.bottom_degree + k + 2}")

    @property
    def top_degree(self):
        return self.bottom_degree + len(self.modules) - 1

    def module(self, n):
        k = n - self.bottom_degree
        if 0 <= k < len(self.modules):
            return self.modules[k]
        return Presented(0)

    def differential(self, n):
        """The map from degree n to degree n-1 (zero outside the support)."""
        k = n - 1 - self.bottom_degree
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return IntMatrix.zeros(self.module(n - 1).rank, self.module(n).rank)

    def padded(self, below=1, above=1):
        """Same complex with zero modules added on both ends."""
        first, last = self.modules[0].rank, self.modules[-1].rank
        mods = [Presented(0)] * below + list(self.modules) + [Presented(0)] * above
        ds = [IntMatrix.zeros(0, 0)] * max(below - 1, 0)
        ds += [IntMatrix.zeros(0, first)] if below else []
        ds += list(self.differentials)
        ds += [IntMatrix.zeros(last, 0)] if above else []
        ds += [IntMatrix.zeros(0, 0)] * max(above - 1, 0)
        return ChainComplex(mods, ds, self.bottom_degree - below, check=False)


def homology(C, n):
    """``ker d_n / im d_{n+1}`` as an :class:`AbGroup`."""
    M = C.module(n)
    if M.rank == 0:
        return TRIVIAL
    d_out = C.differential(n)
    d_in = C.differential(n + 1)
    if all(C.module(k).is_free for k in (n - 1, n, n + 1)):
        r_out = len(smith_diagonal(d_out))
        diag_in = smith_diagonal(d_in)
        return AbGroup.from_orders(diag_in, rank=M.rank - r_out - len(diag_in))
    # General case: cycles are x with d x in image(Q_{n-1}); boundaries are
    # image(d_{n+1}) + image(Q_n).
    stacked = d_out.hstack(C.module(n - 1).relations)
    cycles = [v[: M.rank] for v in kernel_basis(stacked)]
    bounds = [b for b in d_in.columns() + M.relations.columns() if any(b)]
    return subquotient(hermite_rows(cycles, M.rank), bounds, M.rank)


def tensor_complex(resolutions):
    """Total tensor product of two-term free complexes ``P1 --q--> P0``.

    Each resolution is an :class:`IntMatrix` ``q`` of shape ``(rank P0, rank P1)``.
    Returns a free :class:`ChainComplex` in degrees ``0..n``.
    """
    n = len(resolutions)
    dims = [(q.rows, q.cols) for q in resolutions]
    # Summands of degree k: tuples s in {0,1}^n with sum k (1 = use P1).
    by_degree = [[] for _ in range(n + 1)]
    for s in itertools.product((0, 1), repeat=n):
        by_degree[sum(s)].append(s)

    def size(s):
        out = 1
        for t, (a, b) in zip(s, dims):
            out *= b if t else a
        return out

    offsets = []
    for k in range(n + 1):
        off, o = {}, 0
        for s in by_degree[k]:
            off[s] = o
            o += size(s)
        offsets.append((off, o))
    diffs = []
    for k in range(1, n + 1):
        src_off, src_dim = offsets[k]
        dst_off, dst_dim = offsets[k - 1]
        D = [[0] * src_dim for _ in range(dst_dim)]
        for s in by_degree[k]:
            for pos in range(n):
                if not s[pos]:
                    continue
                sign = -1 if sum(s[:pos]) % 2 else 1
                t = s[:pos] + (0,) + s[pos + 1:]
                factors = []
                for p, (si, q) in enumerate(zip(s, resolutions)):
                    if p == pos:
                        factors.append(q)
                    else:
                        factors.append(IntMatrix.identity(q.cols if si else q.rows))
                block = factors[0]
                for f in factors[1:]:
                    block = block.kron(f)
                r0, c0 = dst_off[t], src_off[s]
                for i, row in enumerate(block.entries):
                    for j, v in enumerate(row):
                        if v:
                            D[r0 + i][c0 + j] += sign * v
        diffs.append(IntMatrix(D, dst_dim, src_dim))
    return ChainComplex([offsets[k][1] for k in range(n + 1)], diffs)


def free_resolution(A, pad=0):
    """Two-term free resolution ``Z^k --q--> Z^(rank+k)`` of ``A``.

    ``pad`` adds an acyclic summand ``Z^pad --id--> Z^pad``.
    """
    k = len(A.torsion)
    q = IntMatrix.zeros(A.rank + k, k).entries
    for i, d in enumerate(A.torsion):
        q[A.rank + i][i] = d
    q = IntMatrix(q, A.rank + k, k)
    if pad:
        q = block_diagonal([q, IntMatrix.identity(pad)])
    return q


def multi_tor(groups, i, pads=None):
    """``Tor_i(A_1, ..., A_n)``: homology of the tensor of free resolutions."""
    n = len(groups)
    if i < 0 or i >= n:
        return TRIVIAL
    pads = pads or [0] * n
    C = tensor_complex([free_resolution(A, p) for A, p in zip(groups, pads)])
    return homology(C, i)


def derived_tensor_power(A, n, i, pad=0):
    """``L_i`` of the n-fold tensor power, evaluated at ``A``."""
    if n < 1:
        raise ValueError("arity must be at least 1")
    if i < 0 or i >= n:
        return TRIVIAL
    return multi_tor([A] * n, i, [pad] * n)


def tensor_power(A, n):
    out = A
    for _ in range(n - 1):
        out = ab_tensor(out, A)
    return out
