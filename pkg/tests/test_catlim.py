import random

import pytest

from frlim.catlim import (
    CategoryError,
    FiniteCategory,
    NotStronglyConnected,
    Representation,
    coproduct,
    coproduct_projection_isos,
    equalizer_limit,
    higher_lim,
    lim_invariants,
    nerve_cohomology,
    nerve_homology,
)
from frlim.exactalg import AbGroup, IntMatrix, Presented, TRIVIAL, Z

C2 = AbGroup.cyclic(2)


def chain(n):
    return FiniteCategory.poset(range(n), lambda a, b: a <= b)


def circle():
    return FiniteCategory.poset("abcd", lambda a, b: a == b or (a in "ab" and b in "cd"))


def diamond():
    return FiniteCategory.poset([0, 1, 2, 3], lambda a, b: a == b or a == 0 or b == 3)


def vee():
    return FiniteCategory.poset("abc", lambda a, b: a == b or b == "c")


def z2_groupoid():
    return FiniteCategory.groupoid([0, 1], lambda a, b: (a + b) % 2, 0, 2)


def iso_pair():
    return FiniteCategory.groupoid([0], lambda a, b: 0, 0, 2)


CATEGORIES = {
    "point": lambda: chain(1),
    "chain2": lambda: chain(2),
    "chain3": lambda: chain(3),
    "diamond": diamond,
    "vee": vee,
    "circle": circle,
    "Z/2": lambda: FiniteCategory.cyclic_group(2),
    "Z/3": lambda: FiniteCategory.cyclic_group(3),
    "iso-pair": iso_pair,
    "Z/2-groupoid": z2_groupoid,
}

# Integral cohomology of the classifying spaces, degrees 0..3.
Z3 = AbGroup.cyclic(3)
EXPECTED = {
    "point": [Z, TRIVIAL, TRIVIAL, TRIVIAL],
    "chain2": [Z, TRIVIAL, TRIVIAL, TRIVIAL],
    "chain3": [Z, TRIVIAL, TRIVIAL, TRIVIAL],
    "diamond": [Z, TRIVIAL, TRIVIAL, TRIVIAL],
    "vee": [Z, TRIVIAL, TRIVIAL, TRIVIAL],
    "circle": [Z, Z, TRIVIAL, TRIVIAL],
    "Z/2": [Z, TRIVIAL, C2, TRIVIAL],
    "Z/3": [Z, TRIVIAL, Z3, TRIVIAL],
    "iso-pair": [Z, TRIVIAL, TRIVIAL, TRIVIAL],
    "Z/2-groupoid": [Z, TRIVIAL, C2, TRIVIAL],
}


@pytest.mark.parametrize("name", sorted(CATEGORIES))
def test_constant_lim_equals_nerve_cohomology(name):
    C = CATEGORIES[name]()
    for M in (Z, C2):
        rep = Representation.constant(C, M)
        for n in range(4):
            a = higher_lim(rep, n)
            assert a == nerve_cohomology(C, M, n)
            assert a == higher_lim(rep, n, normalized=True)
            assert nerve_cohomology(C, M, n) == nerve_cohomology(C, M, n, normalized=True)
            if M == Z:
                assert a == EXPECTED[name][n]


def test_nerve_homology_of_circle():
    assert nerve_homology(circle(), 1) == Z
    assert nerve_homology(FiniteCategory.cyclic_group(2), 1) == C2


def test_terminal_object_kills_higher_limits():
    for C in (chain(3), diamond(), vee()):
        for M in (Z, AbGroup.cyclic(4)):
            rep = Representation.constant(C, M)
            for n in (1, 2, 3):
                assert higher_lim(rep, n).is_trivial


def test_higher_lim_needs_room():
    with pytest.raises(ValueError):
        higher_lim(Representation.constant(chain(2), Z), 2, D=2)


def _sign_rep():
    C = FiniteCategory.cyclic_group(2)
    return Representation(C, {"*": Presented(1)}, {0: IntMatrix([[1]]), 1: IntMatrix([[-1]])})


def test_invariants_of_group_actions():
    assert lim_invariants(_sign_rep()) == TRIVIAL
    assert lim_invariants(Representation.constant(FiniteCategory.cyclic_group(2), Z)) == Z
    assert lim_invariants(Representation.constant(iso_pair(), Z)) == Z
    C = FiniteCategory.cyclic_group(2)
    swap = Representation(C, {"*": Presented(2)},
                          {0: IntMatrix.identity(2), 1: IntMatrix([[0, 1], [1, 0]])})
    assert lim_invariants(swap) == Z
    # Z[Z/2] is coinduced, so it has no higher cohomology.
    assert all(higher_lim(swap, n).is_trivial for n in (1, 2, 3))
    # Z/4 with the generator acting by 3 = -1: invariants are {0, 2}.
    z4 = Representation(C, {"*": Presented(1, IntMatrix([[4]]))},
                        {0: IntMatrix([[1]]), 1: IntMatrix([[3]])})
    assert lim_invariants(z4) == C2 == equalizer_limit(z4) == higher_lim(z4, 0)


def test_sign_representation_cohomology():
    rep = _sign_rep()
    assert [higher_lim(rep, n) for n in range(4)] == [TRIVIAL, C2, TRIVIAL, C2]


def test_invariants_require_strong_connectivity():
    with pytest.raises(NotStronglyConnected):
        lim_invariants(Representation.constant(chain(2), Z))


def test_category_axioms_are_checked():
    with pytest.raises(CategoryError):
        FiniteCategory.group([0, 1], lambda a, b: 0, 0)  # unit law fails
    C = chain(2)
    with pytest.raises(CategoryError):
        Representation(C, {0: Presented(1), 1: Presented(1)},
                       {(0, 0): IntMatrix([[2]]), (1, 1): IntMatrix([[1]]), (0, 1): IntMatrix([[1]])})
    with pytest.raises(CategoryError):
        Representation(C, {0: Presented(1), 1: Presented(1, IntMatrix([[2]]))},
                       {(0, 0): IntMatrix([[1]]), (1, 1): IntMatrix([[1]]), (0, 1): IntMatrix([[1, 0]])})


def test_json_round_trip():
    C = diamond()
    obj = C.to_json()
    obj = {"objects": obj["objects"],
           "morphisms": [{"name": f"{m['dom']}{m['cod']}", "dom": m["dom"], "cod": m["cod"]}
                         for m in obj["morphisms"]],
           "identities": {str(k): f"{k}{k}" for k in obj["objects"]},
           "compose": [[f"{g[0]}{g[1]}", f"{f[0]}{f[1]}", f"{h[0]}{h[1]}"]
                       for g, f, h in obj["compose"]]}
    obj["identities"] = {k: v for k, v in zip(obj["objects"], obj["identities"].values())}
    D = FiniteCategory.from_json(obj)
    for n in range(3):
        assert higher_lim(Representation.constant(D, Z), n) == higher_lim(
            Representation.constant(C, Z), n)


def _random_unimodular(rng, k):
    M = IntMatrix.identity(k)
    for _ in range(4):
        i, j = rng.sample(range(k), 2) if k > 1 else (0, 0)
        if i == j:
            continue
        E = [[int(a == b) for b in range(k)] for a in range(k)]
        E[i][j] = rng.choice([-2, -1, 1, 2])
        M = M @ IntMatrix(E, k, k)
    return M


def _random_rep(rng):
    kind = rng.choice(["chain", "vee", "z2"])
    if kind == "chain":
        n = rng.randint(1, 4)
        C = chain(n)
        ranks = [rng.randint(0, 2) for _ in range(n)]
        step = {a: IntMatrix([[rng.randint(-2, 2) for _ in range(ranks[a])]
                              for _ in range(ranks[a + 1])], ranks[a + 1], ranks[a])
                for a in range(n - 1)}
        maps = {}
        for a in range(n):
            for b in range(a, n):
                M = IntMatrix.identity(ranks[a])
                for c in range(a, b):
                    M = step[c] @ M
                maps[(a, b)] = M
        return Representation(C, {a: Presented(ranks[a]) for a in range(n)}, maps)
    if kind == "vee":
        C = vee()
        r = {o: rng.randint(0, 2) for o in "abc"}
        maps = {(o, o): IntMatrix.identity(r[o]) for o in "abc"}
        for o in "ab":
            maps[(o, "c")] = IntMatrix([[rng.randint(-2, 2) for _ in range(r[o])]
                                        for _ in range(r["c"])], r["c"], r[o])
        return Representation(C, {o: Presented(r[o]) for o in "abc"}, maps)
    # Z/2 acting on Z^k by a conjugate of a diagonal sign matrix
    C = FiniteCategory.cyclic_group(2)
    k = rng.randint(1, 3)
    S = _random_unimodular(rng, k)
    Sinv = IntMatrix.from_columns([_solve(S, [int(t == j) for t in range(k)]) for j in range(k)], k)
    D = IntMatrix.diagonal([rng.choice([1, -1]) for _ in range(k)])
    act = S @ D @ Sinv
    assert act @ act == IntMatrix.identity(k)
    return Representation(C, {"*": Presented(k)}, {0: IntMatrix.identity(k), 1: act})


def _solve(S, e):
    """Integer solution of S x = e for unimodular S, through the Smith form."""
    from frlim.exactalg import smith_normal_form

    Sn, U, V = smith_normal_form(S)
    y = (U @ IntMatrix.from_columns([e], S.rows)).column(0)
    y = [a // Sn[i, i] for i, a in enumerate(y)]
    return (V @ IntMatrix.from_columns([y], S.cols)).column(0)


def test_h0_equals_equalizer_limit_on_random_representations():
    rng = random.Random(2024)
    for _ in range(20):
        rep = _random_rep(rng)
        assert higher_lim(rep, 0) == equalizer_limit(rep)
        if rep.category.strongly_connected():
            assert lim_invariants(rep) == equalizer_limit(rep)


@pytest.mark.parametrize("make", [chain, lambda n: diamond(), lambda n: vee()])
def test_coproduct_injections_induce_isomorphisms(make):
    C = make(3)
    assert coproduct(C, C.objects[0], C.objects[-1]) is not None
    rng = random.Random(5)
    rep = Representation.constant(C, Z)
    assert coproduct_projection_isos(rep, 2) == (True, True)
    if C.objects == list(range(3)):
        rep = _random_rep_on_chain(rng, C)
        assert coproduct_projection_isos(rep, 2) == (True, True)


def _random_rep_on_chain(rng, C):
    step = [IntMatrix([[rng.randint(-3, 3)]]) for _ in range(2)]
    maps = {}
    for a in range(3):
        for b in range(a, 3):
            M = IntMatrix.identity(1)
            for c in range(a, b):
                M = step[c] @ M
            maps[(a, b)] = M
    return Representation(C, {a: Presented(1) for a in range(3)}, maps)


def test_groups_lack_coproducts():
    with pytest.raises(CategoryError):
        coproduct_projection_isos(Representation.constant(FiniteCategory.cyclic_group(2), Z), 1)
