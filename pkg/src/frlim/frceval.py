"""Evaluate fr-codes on concrete finite groups.

A code ``(x, i)`` names the functor ``G -> lim^i x``.  The evaluator does not
touch the category of presentations; it recognizes which known functor the
code is equal to and computes that functor, usually along two independent
routes so that the answers can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .exactalg import (
    AbGroup,
    IntMatrix,
    TRIVIAL,
    ab_tensor,
    ab_tor,
    cokernel,
    derived_tensor_power,
    hermite_rows,
    multi_tor,
    solve_in_basis,
    subquotient,
    tensor_power,
)
from .freegrp import abelianization, fox_derivative, schreier_data, todd_coxeter
from .frlang import Intersection, expand_sentence, normalize, parse
from .gruenberg import FiniteGroup, build_resolution, group_homology, lattice_group_homology
from . import magnus


class UnknownCode(ValueError):
    pass


# ---------------------------------------------------------------------------
# Descriptors


@dataclass(frozen=True)
class Descriptor:
    tag: str
    args: tuple = ()

    def __str__(self):
        return f"{self.tag}({', '.join(map(str, self.args))})" if self.args else self.tag


def _d(tag, *args):
    return Descriptor(tag, tuple(args))


ZERO = _d("Zero")
UNKNOWN = _d("Unknown")

TAGS = {
    "Zero", "AugIdealTensorPower", "GabTensorPower", "Homology", "DerivedTensor",
    "TorGab", "AugModTensor", "AugQuotient", "AugPower", "Custom", "Unknown",
}


@dataclass(frozen=True)
class FrCode:
    expr: object
    lim_degree: int

    def __post_init__(self):
        if self.lim_degree < 0:
            raise ValueError("lim degree must be >= 0")

    @classmethod
    def of(cls, text, lim_degree):
        return cls(parse(text), lim_degree)


@dataclass(frozen=True)
class TableEntry:
    code: str
    lims: tuple  # descriptors for lim^1 .. lim^4
    note: str = ""

    def descriptor(self, i):
        if i == 0:
            return ZERO
        if 1 <= i <= len(self.lims):
            return self.lims[i - 1]
        return UNKNOWN

    @property
    def sentence(self):
        return normalize(expand_sentence(parse(self.code)))


@dataclass(frozen=True)
class FunctorValue:
    group: AbGroup
    provenance: tuple
    descriptor: Descriptor = ZERO
    routes: tuple = ()  # (route name, AbGroup) pairs

    def __post_init__(self):
        if not self.provenance:
            raise ValueError("provenance must be nonempty")

    @property
    def agrees(self):
        return all(g == self.group for _, g in self.routes)

    def to_json(self):
        return {
            "value": self.group.to_json(),
            "descriptor": str(self.descriptor),
            "provenance": list(self.provenance),
            "routes": {name: g.to_json() for name, g in self.routes},
        }


def _table():
    Z_, H = ZERO, (lambda n: _d("Homology", n))
    g2 = _d("AugModTensor", 2)
    rows = [
        ("f", (Z_, Z_, Z_, Z_)),
        ("r", (_d("AugIdealTensorPower", 1), Z_, Z_, Z_)),
        ("rr", (Z_, _d("AugIdealTensorPower", 2), Z_, Z_)),
        ("rrr", (Z_, Z_, _d("AugIdealTensorPower", 3), Z_)),
        ("rrrr", (Z_, Z_, Z_, _d("AugIdealTensorPower", 4))),
        ("fr+rf", (g2, Z_, Z_, Z_)),
        ("ffr+frf+rff", (_d("AugModTensor", 3), Z_, Z_, Z_)),
        ("r+ff", (_d("GabTensorPower", 1), Z_, Z_, Z_)),
        ("r+fff", (_d("AugQuotient", 3), Z_, Z_, Z_)),
        ("rf+ffr", (_d("Custom", "aug_power_tensor", 2), Z_, Z_, Z_)),
        ("rf+fffr", (_d("Custom", "aug_power_tensor", 3), Z_, Z_, Z_)),
        ("rfr+frr+ffff", (_d("TorGab"), Z_, Z_, Z_)),
        ("fr+rf+fff", (_d("GabTensorPower", 2), Z_, Z_, Z_)),
        ("rff+frf+rff+ffff", (_d("GabTensorPower", 3), Z_, Z_, Z_),
         "repeated summand rff; ffr is presumably meant"),
        ("rr+fff", (_d("DerivedTensor", 2, 1), _d("DerivedTensor", 2, 0), Z_, Z_)),
        ("rrr+ffff", (_d("DerivedTensor", 3, 2), _d("DerivedTensor", 3, 1),
                      _d("DerivedTensor", 3, 0), Z_)),
        ("rrrr+fffff", (_d("DerivedTensor", 4, 3), _d("DerivedTensor", 4, 2),
                        _d("DerivedTensor", 4, 1), _d("DerivedTensor", 4, 0))),
        ("rr+frf", (H(3), g2, Z_, Z_)),
        ("rrf+frr", (H(4), H(3), g2, Z_)),
        ("rrr+frrf", (H(5), H(4), H(3), g2)),
        ("rrrf+frrr", (H(6), H(5), H(4), H(3))),
        ("rf+ffr+ffff", (_d("Custom", "aug_graded_tensor_gab", 2), Z_, Z_, Z_)),
        ("rfff+rfr+rrf", (Z_, _d("Custom", "aug_tensor_gab", 1, 2), Z_, Z_)),
        ("rrfff+rrfr+rrrf", (Z_, Z_, _d("Custom", "aug_tensor_gab", 2, 2), Z_)),
    ]
    out = []
    for row in rows:
        code, lims = row[0], row[1]
        note = row[2] if len(row) > 2 else ""
        parse(code)
        for dsc in lims:
            assert dsc.tag in TAGS
        out.append(TableEntry(code, lims, note))
    return out


_TABLE = _table()


def builtin_table():
    return list(_TABLE)


# ---------------------------------------------------------------------------
# Recognition


def _pattern_sets(n):
    """Named sentence families of size parameter n, each as a normalized tuple."""
    fr = lambda i: "f" * (i - 1) + "r" + "f" * (n - i)
    out = {
        "rn": normalize(["r" * n]),
        "aug_mod": normalize([fr(i) for i in range(1, n + 1)]),
        "gab_tensor": normalize([fr(i) for i in range(1, n + 1)] + ["f" * (n + 1)]),
        "L": normalize(["r" * n, "f" * (n + 1)]),
        "h_odd": normalize(["r" * n, "f" + "r" * (n - 1) + "f"]),
        "h_even": normalize(["f" + "r" * n, "r" * n + "f"]),
        "fn": normalize(["f" * n]),
    }
    if n >= 2:
        out["aug_quot"] = normalize(["r", "f" * n])
    return out


def _homology_shift(k, j):
    """Descriptor of lim^j of the code for H_k, shifting down one degree per step."""
    if j == 1:
        return _d("Homology", k) if k != 2 else _d("AugModTensor", 2)
    m = k + 1 - j
    if m >= 3:
        return _d("Homology", m)
    if m == 2:
        return _d("AugModTensor", 2)
    return ZERO


def _intersection_power(node):
    """``n`` when node is ``r & f^n`` (either order), else None."""
    if not isinstance(node, Intersection) or len(node.terms) != 2:
        return None
    words = []
    for t in node.terms:
        s = expand_sentence(t)
        if s is None or len(s) != 1:
            return None
        words.append(next(iter(s)))
    words.sort(key=lambda w: w != "r")
    r, fpow = words
    if r == "r" and fpow and set(fpow) == {"f"}:
        return len(fpow)
    return None


def recognize(code, lim_degree=None):
    """Descriptor of the functor named by a code, or ``UNKNOWN``.

    Accepts a FrCode, or a code string together with ``lim_degree``.
    """
    if not isinstance(code, FrCode):
        code = FrCode.of(code, 1 if lim_degree is None else lim_degree)
    i = code.lim_degree
    if i == 0:
        return ZERO
    n_int = _intersection_power(code.expr)
    if n_int is not None:
        return _d("AugPower", n_int) if i == 1 else UNKNOWN
    words = expand_sentence(code.expr)
    if words is None:
        return UNKNOWN
    s = normalize(words)
    for entry in _TABLE:
        if entry.sentence == s and i <= len(entry.lims):
            return entry.descriptor(i)
    longest = max(len(w) for w in s)
    for n in range(1, longest + 1):
        p = _pattern_sets(n)
        if s == p["fn"]:
            return ZERO
        if s == p["h_odd"] and n >= 1:
            return _homology_shift(2 * n - 1, i)
        if s == p["h_even"]:
            return _homology_shift(2 * n, i)
        if s == p["L"]:
            return _d("DerivedTensor", n, n - i) if i <= n else ZERO
        if s == p["rn"]:
            return _d("AugIdealTensorPower", n) if i == n else ZERO
        if s == p["aug_mod"]:
            return _d("AugModTensor", n) if i == 1 else ZERO
        if s == p["gab_tensor"]:
            return _d("GabTensorPower", n) if i == 1 else ZERO
        if "aug_quot" in p and s == p["aug_quot"]:
            return _d("AugQuotient", n) if i == 1 else ZERO
    return UNKNOWN


# ---------------------------------------------------------------------------
# Right ZG-modules as presented Z-modules


@dataclass
class RightModule:
    """``Z^rank / relations`` with the right action of each group element as a matrix."""

    rank: int
    relations: IntMatrix
    act: list  # act[h] maps a column vector v to v.h

    def group(self):
        return cokernel(self.relations)

    def act_zg(self, elem):
        M = IntMatrix.zeros(self.rank, self.rank)
        for h, c in elem.items():
            M = M + IntMatrix([[c * x for x in row] for row in self.act[h].entries],
                              self.rank, self.rank)
        return M


def _stack_columns(cols, rows):
    return IntMatrix.from_columns(cols, rows) if cols else IntMatrix.zeros(rows, 0)


class GroupContext:
    """Cached data for one finite presentation."""

    def __init__(self, P, coset_bound=10_000):
        self.P = P
        self.table = todd_coxeter(P, coset_bound)
        self.schreier = schreier_data(P, self.table)
        self.G = FiniteGroup(self.schreier)
        self.order = self.G.order
        self._res = None
        self._aug_powers = {}

    @cached_property
    def gab(self):
        return abelianization(self.P)

    def resolution(self, N):
        if self._res is None or self._res.max_degree < N:
            self._res = build_resolution(self.P, N)
        return self._res

    def homology(self, n):
        return group_homology(self.P, n, resolution=self.resolution(n + 1))

    # ZG as Z^|G| with the regular representation
    def right_mult(self, v, h):
        out = [0] * self.order
        for g, c in enumerate(v):
            if c:
                out[self.G.mul[g][h]] += c
        return out

    def zg_product(self, u, v):
        out = [0] * self.order
        for g, a in enumerate(u):
            if a:
                for h, b in enumerate(v):
                    if b:
                        out[self.G.mul[g][h]] += a * b
        return out

    def aug_power(self, k):
        """Hermite basis of ``g^k`` inside ZG."""
        if k not in self._aug_powers:
            if k == 0:
                basis = [[1 if j == g else 0 for j in range(self.order)] for g in range(self.order)]
            elif k == 1:
                basis = []
                for g in range(1, self.order):
                    v = [0] * self.order
                    v[g] += 1
                    v[0] -= 1
                    basis.append(v)
            else:
                prev, one = self.aug_power(k - 1), self.aug_power(1)
                basis = [self.zg_product(a, b) for a in prev for b in one]
            self._aug_powers[k] = hermite_rows(basis, self.order)
        return self._aug_powers[k]

    def ideal_module(self, k):
        """``g^k`` (``ZG`` for k = 0) as a free right module in its Hermite basis."""
        basis = self.aug_power(k)
        rank = len(basis)
        act = []
        for h in range(self.order):
            cols = [solve_in_basis(basis, self.right_mult(b, h)) for b in basis]
            act.append(_stack_columns(cols, rank))
        return RightModule(rank, IntMatrix.zeros(rank, 0), act)

    def left_aug_action(self):
        """Left action of each group element on the basis of g, as matrices."""
        basis = self.aug_power(1)
        rank = len(basis)
        out = []
        for h in range(self.order):
            cols = [solve_in_basis(basis, self.zg_product(_delta(h, self.order), b)) for b in basis]
            out.append(_stack_columns(cols, rank))
        return out


def _delta(h, n):
    v = [0] * n
    v[h] = 1
    return v


def tensor_with_aug_coequalizer(M, ctx):
    """``M (x)_ZG g`` as the quotient of ``M (x)_Z g`` by ``m.h (x) a - m (x) h.a``.

    Returns a RightModule, the right action coming from g.
    """
    gmod = ctx.ideal_module(1)
    left = ctx.left_aug_action()
    a, b = M.rank, gmod.rank
    n = a * b
    I_a, I_b = IntMatrix.identity(a), IntMatrix.identity(b)
    rel_cols = []
    if M.relations.cols:
        rel_cols += (M.relations.kron(I_b)).columns()
    gens = [ctx.G.coset(w) for w in _generator_words(ctx)]
    for h in gens:
        D = M.act[h].kron(I_b) - I_a.kron(left[h])
        rel_cols += D.columns()
    rel_cols = [c for c in rel_cols if any(c)]
    act = [I_a.kron(gmod.act[h]) for h in range(ctx.order)]
    return RightModule(n, _stack_columns(rel_cols, n), act)


def _generator_words(ctx):
    from .freegrp import FreeWord

    return [FreeWord.gen(i) for i in range(ctx.P.num_generators)]


def tensor_with_aug_fox(M, ctx):
    """``M (x)_ZG g`` from the Fox presentation ``ZG^m -> ZG^d -> g -> 0``.

    Only the abelian group is produced.
    """
    d = ctx.P.num_generators
    a = M.rank
    rel_cols = []
    if M.relations.cols:
        for i in range(d):
            for col in M.relations.columns():
                v = [0] * (a * d)
                v[i * a:(i + 1) * a] = col
                rel_cols.append(v)
    for r in ctx.P.relators:
        blocks = [M.act_zg(ctx.G.zg_image(fox_derivative(r, i, d))) for i in range(d)]
        for j in range(a):
            v = []
            for B in blocks:
                v += B.column(j)
            rel_cols.append(v)
    rel_cols = [c for c in rel_cols if any(c)]
    return cokernel(_stack_columns(rel_cols, a * d))


# ---------------------------------------------------------------------------
# Evaluation


def _route_values(desc, ctx):
    """``[(route name, AbGroup), ...]`` for a descriptor; first route is primary."""
    tag, args = desc.tag, desc.args
    A = ctx.gab
    aug_rank = len(ctx.aug_power(1))
    if tag == "Zero":
        return [("definition", TRIVIAL)]
    if tag == "Homology":
        n = args[0]
        routes = [("gruenberg", ctx.homology(n)),
                  ("lattice-resolution", lattice_group_homology(ctx.P, n))]
        if n == 1:
            routes.append(("abelianization", A))
        return routes
    if tag == "DerivedTensor":
        n, i = args
        routes = [("tensor-of-resolutions", derived_tensor_power(A, n, i)),
                  ("padded-resolutions", derived_tensor_power(A, n, i, pad=1))]
        if i == 0:
            routes.append(("tensor-power", tensor_power(A, n)))
        if n == 2 and i == 1:
            routes.append(("tor-formula", ab_tor(A, A)))
        return routes
    if tag == "GabTensorPower":
        n = args[0]
        return [("tensor-power", tensor_power(A, n)),
                ("tensor-of-resolutions", multi_tor([A] * n, 0, [1] * n)),
                ("magnus", _magnus_gab_tensor(ctx.P, n))]
    if tag == "TorGab":
        AA = ab_tensor(A, A)
        return [("tor-formula", ab_tor(AA, A)),
                ("tensor-of-resolutions", multi_tor([AA, A], 1, [1, 0]))]
    if tag == "AugIdealTensorPower":
        n = args[0]
        gZ = AbGroup.free(aug_rank)
        kernel_rank = ctx.order - 1
        return [("augmentation-lattice", tensor_power(gZ, n)),
                ("tensor-of-resolutions", multi_tor([AbGroup.free(kernel_rank)] * n, 0, [1] * n))]
    if tag == "AugModTensor":
        n = args[0]
        T = ctx.ideal_module(1)
        for _ in range(n - 2):
            T = tensor_with_aug_coequalizer(T, ctx)
        if n == 1:
            return [("augmentation-lattice", AbGroup.free(aug_rank)),
                    ("fox-presentation", tensor_with_aug_fox(ctx.ideal_module(0), ctx))]
        routes = [("coequalizer", tensor_with_aug_coequalizer(T, ctx).group()),
                  ("fox-presentation", tensor_with_aug_fox(T, ctx))]
        if n == 2:
            routes.append(("square-plus-H2", ctx.homology(2) + AbGroup.free(len(ctx.aug_power(2)))))
        return routes
    if tag == "AugQuotient":
        n = args[0]
        return [("zg-lattice", subquotient(ctx.aug_power(1), ctx.aug_power(n), ctx.order)),
                ("magnus", magnus.aug_quotient_via_magnus(ctx.P, n))]
    if tag == "AugPower":
        n = args[0]
        finite = subquotient(ctx.aug_power(1), ctx.aug_power(n), ctx.order).rank == 0
        return [("zg-lattice", AbGroup.free(len(ctx.aug_power(n)))),
                ("finite-index-in-g", AbGroup.free(ctx.order - 1) if finite else None)]
    if tag == "Custom":
        kind = args[0]
        if kind == "aug_power_tensor":
            k = args[1]
            M = ctx.ideal_module(k)
            return [("coequalizer", tensor_with_aug_coequalizer(M, ctx).group()),
                    ("fox-presentation", tensor_with_aug_fox(M, ctx))]
        if kind == "aug_graded_tensor_gab":
            k = args[1]
            zg = subquotient(ctx.aug_power(k), ctx.aug_power(k + 1), ctx.order)
            mg = magnus.aug_graded_via_magnus(ctx.P, k)
            return [("zg-lattice", ab_tensor(zg, A)),
                    ("magnus", multi_tor([mg, A], 0))]
        if kind == "aug_tensor_gab":
            a, b = args[1], args[2]
            gZ = AbGroup.free(aug_rank)
            direct = tensor_power(gZ, a) if a else AbGroup.free(1)
            direct = ab_tensor(direct, tensor_power(A, b))
            return [("tensor-power", direct),
                    ("tensor-of-resolutions",
                     multi_tor([AbGroup.free(ctx.order - 1)] * a + [A] * b, 0, [1] * (a + b)))]
    raise UnknownCode(f"no evaluation route for {desc}")


def _magnus_gab_tensor(P, n):
    """``f^n / (sum f^(i-1) r f^(n-i) + f^(n+1))``, exact in ``Z[F]/f^(n+1)``."""
    R = magnus.TruncRing(P.num_generators, n + 1)
    words = ["f" * (i - 1) + "r" + "f" * (n - i) for i in range(1, n + 1)]
    return magnus.quotient_abgroup(magnus.augmentation_power(R, n),
                                   magnus.sentence_ideal(words, P, R))


_PROVENANCE = {
    "Zero": "lim^i of this code vanishes",
    "Homology": "code identified with integral group homology",
    "DerivedTensor": "code identified with a derived functor of the tensor power of G_ab",
    "GabTensorPower": "code identified with a tensor power of G_ab",
    "TorGab": "code identified with Tor(G_ab (x) G_ab, G_ab)",
    "AugIdealTensorPower": "code identified with a tensor power over Z of the augmentation ideal",
    "AugModTensor": "code identified with a tensor power over ZG of the augmentation ideal",
    "AugQuotient": "code identified with g / g^n",
    "AugPower": "code identified with g^n",
    "Custom": "code identified by table lookup",
}


def evaluate(code, P, lim_degree=None, context=None):
    """Value of a code on the group presented by P.

    ``code`` is a FrCode or a string (then ``lim_degree`` defaults to 1).
    """
    if not isinstance(code, FrCode):
        code = FrCode.of(code, 1 if lim_degree is None else lim_degree)
    desc = recognize(code)
    if desc.tag == "Unknown":
        raise UnknownCode(f"no known functor for {code.expr} at lim^{code.lim_degree}")
    ctx = context or GroupContext(P)
    routes = _route_values(desc, ctx)
    provenance = (_PROVENANCE[desc.tag], f"descriptor {desc}", f"primary route: {routes[0][0]}")
    return FunctorValue(routes[0][1], provenance, desc, tuple(routes))


# ---------------------------------------------------------------------------
# Table verification


def _group_name(P):
    return P.name or "<" + ",".join(P.generator_names) + ">"


def verify_table(groups, max_lim=4, rows=None, game_degrees=(4, 5, 6), game_chain=True):
    """Evaluate every table cell on every group and compare the available routes.

    Returns a list of JSON-ready dicts with keys ``code, lim_degree, group,
    expected_tag, value, provenance, status``; status is ``pass``, ``fail`` or
    ``not-computable``.
    """
    report = []
    entries = builtin_table() if rows is None else rows
    for P in groups:
        ctx = GroupContext(P)
        name = _group_name(P)
        for entry in entries:
            for i in range(1, max_lim + 1):
                desc = entry.descriptor(i)
                cell = {"code": entry.code, "lim_degree": i, "group": name,
                        "expected_tag": str(desc)}
                try:
                    fv = evaluate(FrCode.of(entry.code, i), P, context=ctx)
                except UnknownCode as exc:
                    cell.update(value=None, provenance=[str(exc)], status="not-computable")
                    report.append(cell)
                    continue
                recognized = fv.descriptor == desc
                ok = fv.agrees and recognized
                prov = list(fv.provenance) + [f"{r}: {g}" for r, g in fv.routes]
                if not recognized:
                    prov.append(f"recognized as {fv.descriptor}, table says {desc}")
                cell.update(value=fv.group.to_json(), provenance=prov,
                            status="pass" if ok else "fail")
                report.append(cell)
        if game_chain:
            report.extend(_game_chain_cells(P, ctx, name, game_degrees))
    return report


GAME_CHAIN = (("r", "ff"), ("rf", "fr"), ("rr", "frf"))


def _game_chain_cells(P, ctx, name, degrees):
    """Generation quotients of the (r, ff) chain against H_2 and H_3."""
    cells = []
    for i in (1, 2):
        gen_i, gen_next = GAME_CHAIN[i - 1], GAME_CHAIN[i]
        sq = magnus.generation_quotient(gen_i, gen_next, P, degrees)
        h = ctx.homology(i + 1)
        ok = sq.stable and sq.value == h
        if ok:
            status = "pass"
        elif not _is_prime_power(ctx.order):
            # Truncations only see ZG modulo the intersection of all g^n,
            # which is nonzero unless G is a p-group.
            status = "not-computable"
        else:
            status = "fail"
        cells.append({
            "code": f"({'&'.join(gen_i)})/({'+'.join(gen_next)})",
            "lim_degree": 0,
            "group": name,
            "expected_tag": str(_d("Homology", i + 1)),
            "value": sq.value.to_json() if sq.value is not None else None,
            "provenance": [f"magnus N={N}: {g}" for N, g in sq.values.items()]
                          + [f"gruenberg: {h}"]
                          + ([] if status != "not-computable" else
                             ["magnus truncations are blind to torsion prime to p; G is not a p-group"]),
            "status": status,
        })
    return cells


def _is_prime_power(n):
    if n < 2:
        return False
    p = next(q for q in range(2, n + 1) if n % q == 0)
    while n % p == 0:
        n //= p
    return n == 1


def summarize(report):
    counts = {}
    for cell in report:
        counts[cell["status"]] = counts.get(cell["status"], 0) + 1
    return counts
