"""Free groups, their integral group rings, Fox calculus, Todd-Coxeter and Schreier data.

Generators are numbered from 0; inside a word, generator ``i`` is the letter
``i + 1`` and its inverse is ``-(i + 1)``.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field


class InvalidGenerator(ValueError):
    pass


class Overflow(RuntimeError):
    def __init__(self, bound):
        super().__init__(f"coset enumeration did not close within {bound} cosets")
        self.bound = bound


class IncompleteTable(ValueError):
    pass


class NotInSubgroup(ValueError):
    pass


class WordSyntaxError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _reduce(letters):
    out = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


@dataclass(frozen=True, order=True)
class FreeWord:
    letters: tuple = ()

    def __post_init__(self):
        letters = tuple(int(a) for a in self.letters)
        if 0 in letters:
            raise InvalidGenerator("letter 0 is not a generator")
        object.__setattr__(self, "letters", _reduce(letters))

    @classmethod
    def gen(cls, i, power=1):
        a = i + 1 if power > 0 else -(i + 1)
        return cls((a,) * abs(power))

    def __mul__(self, other):
        return word_multiply(self, other)

    def __pow__(self, k):
        base = self if k >= 0 else word_invert(self)
        return FreeWord(base.letters * abs(k))

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def inverse(self):
        return word_invert(self)

    def format(self, names=None):
        if not self.letters:
            return "1"
        names = names or [chr(ord("x") + i) if i < 3 else f"g{i}" for i in range(26)]
        parts = []
        i = 0
        L = self.letters
        while i < len(L):
            j = i
            while j < len(L) and L[j] == L[i]:
                j += 1
            k = (j - i) * (1 if L[i] > 0 else -1)
            name = names[abs(L[i]) - 1]
            parts.append(name if k == 1 else f"{name}^{k}")
            i = j
        return "*".join(parts)

    def __str__(self):
        return self.format()


IDENTITY = FreeWord()


def word_multiply(u, v):
    return FreeWord(u.letters + v.letters)


def word_invert(u):
    return FreeWord(tuple(-a for a in reversed(u.letters)))


class GroupRingElement:
    """Finite integer combination of reduced words: an element of Z[F]."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for w, c in (terms or {}).items():
            if not isinstance(w, FreeWord):
                w = FreeWord(w)
            c = clean.get(w, 0) + c
            if c:
                clean[w] = c
            else:
                clean.pop(w, None)
        self.terms = clean

    @classmethod
    def of(cls, w, c=1):
        return cls({w: c})

    @classmethod
    def one(cls):
        return cls({IDENTITY: 1})

    def __add__(self, other):
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, 0) + c
        return GroupRingElement(t)

    def __neg__(self):
        return GroupRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement({w: c * other for w, c in self.terms.items()})
        t = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u * v
                t[w] = t.get(w, 0) + a * b
        return GroupRingElement(t)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def augmentation(self):
        return sum(self.terms.values())

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{w}" for w, c in sorted(self.terms.items()))


def fox_derivative(w, i, num_generators=None):
    """Left Fox derivative: ``w - 1 = sum_i d_i(w) * (x_i - 1)``.

    Product rule ``d(uv) = d(u) + u d(v)``.
    """
    if i < 0 or (num_generators is not None and i >= num_generators):
        raise InvalidGenerator(f"no generator {i}")
    t = {}
    prefix = []
    for a in w.letters:
        if a == i + 1:
            p = FreeWord(tuple(prefix))
            t[p] = t.get(p, 0) + 1
        elif a == -(i + 1):
            p = FreeWord(tuple(prefix) + (a,))
            t[p] = t.get(p, 0) - 1
        prefix.append(a)
    return GroupRingElement(t)


def right_fox_derivative(w, i, num_generators=None):
    """Mirror derivative: ``w - 1 = sum_i (x_i - 1) * D_i(w)``.

    Product rule ``D(uv) = D(u) v + D(v)``; used for right modules.
    """
    if i < 0 or (num_generators is not None and i >= num_generators):
        raise InvalidGenerator(f"no generator {i}")
    t = {}
    L = w.letters
    for k, a in enumerate(L):
        if a == i + 1:
            s = FreeWord(L[k + 1:])
            t[s] = t.get(s, 0) + 1
        elif a == -(i + 1):
            s = FreeWord(L[k:])
            t[s] = t.get(s, 0) - 1
    return GroupRingElement(t)


# ---------------------------------------------------------------------------
# Presentations and the word grammar
#
#   word   := factor ('*' factor)*
#   factor := atom ('^' integer)?
#   atom   := identifier | '1' | '(' word ')'
#
# Whitespace between tokens is ignored.  Identifiers must be declared
# generator names; integers may carry a leading '-'.

_TOKEN = re.compile(r"\s*(?:(?P<id>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>-?\d+)|(?P<op>[*^()]))")


def parse_word(text, names):
    index = {n: i for i, n in enumerate(names)}
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    k = 0

    def peek():
        return tokens[k]

    def take():
        nonlocal k
        k += 1
        return tokens[k - 1]

    def word():
        out = factor()
        while peek()[1] == "*":
            take()
            out = out * factor()
        return out

    def factor():
        base = atom()
        if peek()[1] == "^":
            take()
            kind, val, p = take()
            if kind != "int":
                raise WordSyntaxError("expected integer exponent", p)
            base = base ** int(val)
        return base

    def atom():
        kind, val, p = take()
        if kind == "id":
            if val not in index:
                raise WordSyntaxError(f"unknown generator {val!r}", p)
            return FreeWord.gen(index[val])
        if kind == "int" and val == "1":
            return IDENTITY
        if val == "(":
            w = word()
            kind, val, p2 = take()
            if val != ")":
                raise WordSyntaxError("expected ')'", p2)
            return w
        raise WordSyntaxError("expected generator, '1' or '('", p)

    w = word()
    kind, val, p = peek()
    if kind != "end":
        raise WordSyntaxError(f"unexpected {val!r}", p)
    return w


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple
    relators: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generator_names", tuple(self.generator_names))
        object.__setattr__(self, "relators", tuple(self.relators))
        d = len(self.generator_names)
        for r in self.relators:
            if not r.letters:
                raise ValueError("relators must be nonempty after free reduction")
            if any(abs(a) > d for a in r.letters):
                raise InvalidGenerator(f"relator {r} uses an undeclared generator")

    @property
    def num_generators(self):
        return len(self.generator_names)

    @classmethod
    def from_strings(cls, generators, relators, name=""):
        return cls(tuple(generators), tuple(parse_word(r, generators) for r in relators), name)

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.from_strings(obj["generators"], obj["relators"], obj.get("name", ""))

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_json(self):
        out = {
            "generators": list(self.generator_names),
            "relators": [r.format(self.generator_names) for r in self.relators],
        }
        if self.name:
            out["name"] = self.name
        return out

    def __str__(self):
        if self.name:
            return self.name
        gens = ", ".join(self.generator_names)
        rels = ", ".join(r.format(self.generator_names) for r in self.relators)
        return f"<{gens} | {rels}>"


def cyclic(m):
    return Presentation.from_strings(["x"], [f"x^{m}"], f"Z/{m}")


def klein_four():
    return Presentation.from_strings(["x", "y"], ["x^2", "y^2", "(x*y)^2"], "Z/2xZ/2")


def symmetric3():
    return Presentation.from_strings(["x", "y"], ["x^2", "y^3", "(x*y)^2"], "S3")


# ---------------------------------------------------------------------------
# Todd-Coxeter


@dataclass(frozen=True)
class CosetTable:
    """Right action of the generators on cosets of the trivial subgroup of G.

    ``action[i][c]`` is ``c . x_i`` and ``inverse[i][c]`` is ``c . x_i^-1``.
    """

    num_cosets: int
    action: tuple
    inverse: tuple

    def act(self, c, w):
        for a in w.letters:
            c = self.action[a - 1][c] if a > 0 else self.inverse[-a - 1][c]
        return c

    def is_complete(self):
        return all(v is not None for row in self.action for v in row)


def todd_coxeter(P, max_cosets=10_000):
    """HLT enumeration of the cosets of the trivial subgroup of ``P``'s group.

    Cosets are defined in FIFO order and relators are scanned from every live
    coset; coincidences are processed with a union-find queue.
    """
    d = P.num_generators
    cols = [a for i in range(d) for a in (i + 1, -(i + 1))]
    col_of = {a: k for k, a in enumerate(cols)}
    table = [[None] * len(cols)]
    parent = [0]
    rels = [r.letters for r in P.relators]

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def define(c, a):
        if len(table) >= max_cosets:
            raise Overflow(max_cosets)
        n = len(table)
        table.append([None] * len(cols))
        parent.append(n)
        table[c][col_of[a]] = n
        table[n][col_of[-a]] = c
        return n

    def coincidence(a, b):
        queue = [(a, b)]
        while queue:
            a, b = queue.pop()
            a, b = find(a), find(b)
            if a == b:
                continue
            if a > b:
                a, b = b, a
            parent[b] = a
            for k, t in enumerate(table[b]):
                if t is None:
                    continue
                inv = col_of[-cols[k]]
                if table[t][inv] == b:
                    table[t][inv] = None
                t = find(t)
                ta = table[a][k]
                if ta is None:
                    table[a][k] = t
                    if table[t][inv] is None:
                        table[t][inv] = a
                    elif find(table[t][inv]) != a:
                        queue.append((table[t][inv], a))
                else:
                    queue.append((ta, t))
            table[b] = [None] * len(cols)

    def scan_and_fill(c, word):
        # HLT: walk forward, defining new cosets, until the relator closes.
        f = c
        i = 0
        b = c
        j = len(word) - 1
        while True:
            while i <= j and table[f][col_of[word[i]]] is not None:
                f = find(table[f][col_of[word[i]]])
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][col_of[-word[j]]] is not None:
                b = find(table[b][col_of[-word[j]]])
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][col_of[word[i]]] = b
                table[b][col_of[-word[i]]] = f
                return
            define(f, word[i])

    c = 0
    while c < len(table):
        if find(c) == c:
            for w in rels:
                if find(c) != c:
                    break
                scan_and_fill(c, w)
            if find(c) == c:
                for a in cols:
                    if find(c) != c:
                        break
                    if table[c][col_of[a]] is None:
                        define(c, a)
        c += 1

    live = [c for c in range(len(table)) if find(c) == c]
    # Renumber live cosets in BFS order from coset 0 so output is canonical.
    order = {live[0]: 0}
    queue = deque([live[0]])
    while queue:
        c = queue.popleft()
        for a in cols:
            t = find(table[c][col_of[a]])
            if t not in order:
                order[t] = len(order)
                queue.append(t)
    n = len(order)
    action = [[0] * n for _ in range(d)]
    inverse = [[0] * n for _ in range(d)]
    for c, k in order.items():
        for i in range(d):
            action[i][k] = order[find(table[c][col_of[i + 1]])]
            inverse[i][k] = order[find(table[c][col_of[-(i + 1)]])]
    T = CosetTable(n, tuple(map(tuple, action)), tuple(map(tuple, inverse)))
    _validate_table(P, T)
    return T


def _validate_table(P, T):
    for i in range(P.num_generators):
        if sorted(T.action[i]) != list(range(T.num_cosets)):
            raise AssertionError(f"generator {i} does not act bijectively")
        for c in range(T.num_cosets):
            if T.inverse[i][T.action[i][c]] != c:
                raise AssertionError("inverse table inconsistent")
    for r in P.relators:
        for c in range(T.num_cosets):
            if T.act(c, r) != c:
                raise AssertionError(f"relator {r} moves coset {c}")


# ---------------------------------------------------------------------------
# Reidemeister-Schreier


@dataclass(frozen=True)
class SchreierData:
    """Schreier transversal and the induced free basis of R.

    ``basis_index[(c, i)]`` is the 0-based index of the basis element
    ``t_c x_i t_{c x_i}^-1`` or ``None`` for a tree edge.
    """

    presentation: Presentation
    table: CosetTable
    transversal: tuple
    basis: tuple
    basis_index: dict

    @property
    def rank(self):
        return len(self.basis)


def schreier_data(P, T):
    if not T.is_complete():
        raise IncompleteTable("coset table has undefined entries")
    d = P.num_generators
    trans = [None] * T.num_cosets
    trans[0] = IDENTITY
    tree = set()
    queue = deque([0])
    # BFS over generators then inverses in fixed order keeps words minimal.
    steps = [(i, 1) for i in range(d)] + [(i, -1) for i in range(d)]
    while queue:
        c = queue.popleft()
        for i, s in steps:
            t = T.action[i][c] if s > 0 else T.inverse[i][c]
            if trans[t] is None:
                trans[t] = trans[c] * FreeWord.gen(i, s)
                tree.add((c, i) if s > 0 else (t, i))
                queue.append(t)
    basis = []
    index = {}
    for c in range(T.num_cosets):
        for i in range(d):
            if (c, i) in tree:
                index[(c, i)] = None
                continue
            t = T.action[i][c]
            y = trans[c] * FreeWord.gen(i) * trans[t].inverse()
            index[(c, i)] = len(basis)
            basis.append(y)
    return SchreierData(P, T, tuple(trans), tuple(basis), index)


def rewrite_in_R(w, S):
    """Signed 1-based basis indices spelling ``w`` in the Schreier basis of R."""
    T = S.table
    c = 0
    out = []
    for a in w.letters:
        i = abs(a) - 1
        if a > 0:
            j = S.basis_index[(c, i)]
            if j is not None:
                out.append(j + 1)
            c = T.action[i][c]
        else:
            c = T.inverse[i][c]
            j = S.basis_index[(c, i)]
            if j is not None:
                out.append(-(j + 1))
    if c != 0:
        raise NotInSubgroup(f"{w} does not lie in R")
    return _reduce(out)


def expand_rewrite(indices, S):
    w = IDENTITY
    for j in indices:
        y = S.basis[abs(j) - 1]
        w = w * (y if j > 0 else y.inverse())
    return w


def relator_exponent_matrix(P):
    """Columns are relators, rows generators: the abelianized relations."""
    from .exactalg import IntMatrix

    d = P.num_generators
    cols = []
    for r in P.relators:
        v = [0] * d
        for a in r.letters:
            v[abs(a) - 1] += 1 if a > 0 else -1
        cols.append(v)
    return IntMatrix.from_columns(cols, d)


def abelianization(P):
    from .exactalg import cokernel

    return cokernel(relator_exponent_matrix(P))
