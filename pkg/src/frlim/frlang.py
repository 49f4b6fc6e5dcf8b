"""The fr-code language: monomials in f and r, ideal expressions, and the intersection game.

Concrete syntax (whitespace-insensitive except as a sum separator)::

    sum     := inter (('+' | <space>) inter)*
    inter   := product ('&' product)*
    product := factor factor*
    factor  := atom ('^' integer)?
    atom    := 'f' | 'r' | '(' sum ')'

A run of whitespace separates summands only when it sits between two
complete terms, so ``"rr frf"``, ``"rr+frf"`` and ``"rr + frf"`` are the same
sentence, while ``"r & f^2"`` is a single intersection.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

ALPHABET = "fr"


class FrSyntaxError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Letter:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Sum:
    terms: tuple

    def __str__(self):
        return "+".join(_wrap(t, (Sum,)) for t in self.terms)


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __str__(self):
        return "".join(_wrap(t, (Sum, Intersection)) for t in self.factors)


@dataclass(frozen=True)
class Intersection:
    terms: tuple

    def __str__(self):
        return " & ".join(_wrap(t, (Sum, Intersection)) for t in self.terms)


@dataclass(frozen=True)
class Power:
    base: object
    exponent: int

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError("powers must have exponent >= 1")

    def __str__(self):
        return f"{_wrap(self.base, (Sum, Intersection, Product, Power))}^{self.exponent}"


def _wrap(node, kinds):
    s = str(node)
    return f"({s})" if isinstance(node, kinds) else s


def ast_repr(node):
    """Constructor-style rendering, e.g. ``Sum(Product(r, r), Product(f, r, f))``."""
    if isinstance(node, Letter):
        return node.name
    if isinstance(node, Power):
        return f"Power({ast_repr(node.base)}, {node.exponent})"
    kids = node.terms if isinstance(node, (Sum, Intersection)) else node.factors
    return f"{type(node).__name__}({', '.join(ast_repr(k) for k in kids)})"


# ---------------------------------------------------------------------------
# Parser


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            j = i
            while j < len(text) and text[j].isspace():
                j += 1
            tokens.append(("ws", None, i))
            i = j
        elif ch in "fr":
            tokens.append(("letter", ch, i))
            i += 1
        elif ch in "+&^()":
            tokens.append((ch, ch, i))
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j]), i))
            i = j
        else:
            raise FrSyntaxError(f"invalid character {ch!r}", i)
    # Whitespace is a sum separator only between a term end and a term start.
    out = []
    for k, tok in enumerate(tokens):
        if tok[0] != "ws":
            out.append(tok)
            continue
        prev = out[-1][0] if out else None
        nxt = tokens[k + 1][0] if k + 1 < len(tokens) else None
        if prev in ("letter", ")", "int") and nxt in ("letter", "("):
            out.append(("+", "+", tok[2]))
    out.append(("end", None, len(text)))
    return out


def parse(text):
    if not text.strip():
        raise FrSyntaxError("empty fr-code", 0)
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos]

    def take():
        nonlocal pos
        pos += 1
        return toks[pos - 1]

    def sum_():
        terms = [inter()]
        while peek()[0] == "+":
            take()
            terms.append(inter())
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def inter():
        terms = [product()]
        while peek()[0] == "&":
            take()
            terms.append(product())
        return terms[0] if len(terms) == 1 else Intersection(tuple(terms))

    def product():
        factors = [factor()]
        while peek()[0] in ("letter", "("):
            factors.append(factor())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def factor():
        base = atom()
        while peek()[0] == "^":
            take()
            kind, val, p = take()
            if kind != "int" or val < 1:
                raise FrSyntaxError("expected a positive integer exponent", p)
            base = Power(base, val)
        return base

    def atom():
        kind, val, p = take()
        if kind == "letter":
            return Letter(val)
        if kind == "(":
            node = sum_()
            kind2, _, p2 = take()
            if kind2 != ")":
                raise FrSyntaxError("expected ')'", p2)
            return node
        if kind == "end":
            raise FrSyntaxError("unexpected end of input", p)
        raise FrSyntaxError(f"unexpected {val!r}", p)

    node = sum_()
    kind, val, p = peek()
    if kind != "end":
        raise FrSyntaxError(f"unexpected {val!r}", p)
    return node


# ---------------------------------------------------------------------------
# Monomials and sentences


def check_word(w):
    if not w or any(ch not in ALPHABET for ch in w):
        raise ValueError(f"{w!r} is not a nonempty word over {{f, r}}")
    return w


def expand_word(node):
    """The monomial spelled by a product/power tree, or ``None`` if not a monomial."""
    if isinstance(node, Letter):
        return node.name
    if isinstance(node, Power):
        b = expand_word(node.base)
        return None if b is None else b * node.exponent
    if isinstance(node, Product):
        parts = [expand_word(f) for f in node.factors]
        return None if any(p is None for p in parts) else "".join(parts)
    return None


def expand_sentence(node):
    """Expand a sum/product/power expression into a set of monomials.

    Products distribute over sums.  Returns ``None`` for expressions with
    intersections, which have no polynomial form.
    """
    if isinstance(node, Letter):
        return {node.name}
    if isinstance(node, Sum):
        out = set()
        for t in node.terms:
            s = expand_sentence(t)
            if s is None:
                return None
            out |= s
        return out
    if isinstance(node, Product):
        out = {""}
        for f in node.factors:
            s = expand_sentence(f)
            if s is None:
                return None
            out = {a + b for a in out for b in s}
        return out
    if isinstance(node, Power):
        s = expand_sentence(node.base)
        if s is None:
            return None
        out = {""}
        for _ in range(node.exponent):
            out = {a + b for a in out for b in s}
        return out
    return None


def word_contains(w, v):
    """True when the ideal of ``w`` lies inside the ideal of ``v``.

    Rule: ``v`` embeds in ``w`` as a scattered subsequence where an ``f`` of
    ``v`` may land on either letter and an ``r`` of ``v`` only on an ``r``.
    Greedy leftmost matching is exact for this rule.
    """
    i = 0
    n = len(w)
    for ch in v:
        if ch == "f":
            if i >= n:
                return False
            i += 1
        else:
            while i < n and w[i] != "r":
                i += 1
            if i >= n:
                return False
            i += 1
    return True


def _key(w):
    return w


def sort_sentence(words):
    """Canonical order: by length, then lexicographically with f < r."""
    return tuple(sorted(set(words), key=_key))


def normalize(words):
    words = set(words)
    for w in words:
        check_word(w)
    keep = [w for w in words if not any(v != w and word_contains(w, v) for v in words)]
    return sort_sentence(keep)


def maximal(words):
    """Maximal elements (largest ideals) of a set of words."""
    return normalize(words)


def sentence_str(words):
    return "+".join(words)


# ---------------------------------------------------------------------------
# Intersection game


def merges(u, v):
    """All weakening-merges of two words.

    Each output position consumes a letter of ``u``, of ``v``, or one of each;
    the letter is ``r`` when any consumed letter is ``r``.  These are exactly
    the minimal words (largest ideals) in which both embed.
    """
    out = set()

    def rec(i, j, acc):
        if i == len(u) and j == len(v):
            out.add("".join(acc))
            return
        if i < len(u):
            acc.append(u[i])
            rec(i + 1, j, acc)
            acc.pop()
        if j < len(v):
            acc.append(v[j])
            rec(i, j + 1, acc)
            acc.pop()
        if i < len(u) and j < len(v):
            acc.append("r" if "r" in (u[i], v[j]) else "f")
            rec(i + 1, j + 1, acc)
            acc.pop()

    rec(0, 0, [])
    return out


def common_lower_bounds(words):
    """Maximal monomials contained in every word of ``words``."""
    words = list(words)
    current = {words[0]}
    for w in words[1:]:
        cand = set()
        for u in current:
            cand |= merges(u, w)
        current = set(maximal(cand))
    return sort_sentence(current)


def game_step(origin):
    return common_lower_bounds(normalize(origin))


def game(origin, k):
    """``[origin, gen2, ..., gen_k]``."""
    if k < 1:
        raise ValueError("need at least one generation")
    gens = [normalize(origin)]
    for _ in range(k - 1):
        gens.append(game_step(gens[-1]))
    return gens


def words_up_to(n):
    for length in range(1, n + 1):
        for t in itertools.product(ALPHABET, repeat=length):
            yield "".join(t)


def brute_force_step(origin, max_len):
    """Reference step by exhaustive enumeration of all words up to ``max_len``."""
    inside = [w for w in words_up_to(max_len) if all(word_contains(w, a) for a in origin)]
    return maximal(inside)


# ---------------------------------------------------------------------------
# Published generation tables

PUBLISHED_GAMES = {
    ("r", "ff"): [
        ("r", "ff"),
        ("rf", "fr"),
        ("rr", "frf"),
        ("rrf", "frr"),
        ("rrr", "frrf"),
    ],
    ("rr", "fff"): [
        ("rr", "fff"),
        ("rrf", "rfr", "frr"),
        ("rrr", "frfrf"),
        ("frrrf", "frfrr", "rrfrf"),
        ("rrrrr", "frfrfrf"),
    ],
    ("r", "fff"): [
        ("r", "fff"),
        ("rff", "frf", "ffr"),
        ("rrr", "frrf", "rfrf", "frfr", "ffrff"),
        ("frrrf", "frfrfr", "rfrfrf"),
        ("rrrrrr", "frfrfrf", "rfrrrfr", "frrrrfr", "rfrrrrf"),
    ],
}
