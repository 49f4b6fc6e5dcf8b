import itertools

import pytest

from frlim.exactalg import AbGroup, TRIVIAL, ab_tensor, ab_tor, derived_tensor_power
from frlim.freegrp import abelianization, cyclic, klein_four, symmetric3
from frlim.frceval import (
    Descriptor,
    FrCode,
    FunctorValue,
    GroupContext,
    TAGS,
    UNKNOWN,
    UnknownCode,
    ZERO,
    builtin_table,
    evaluate,
    recognize,
    summarize,
    verify_table,
)
from frlim.frlang import parse
from frlim.gruenberg import group_homology


def d(tag, *args):
    return Descriptor(tag, tuple(args))


def test_table_shape():
    table = builtin_table()
    assert len(table) == 24
    codes = [e.code for e in table]
    assert len(set(codes)) == len(codes)
    for e in table:
        parse(e.code)
        assert len(e.lims) == 4
        assert all(x.tag in TAGS for x in e.lims)
    row = {e.code: e for e in table}
    assert row["r"].lims == (d("AugIdealTensorPower", 1), ZERO, ZERO, ZERO)
    assert row["rr+frf"].lims[:2] == (d("Homology", 3), d("AugModTensor", 2))
    assert row["f"].lims == (ZERO,) * 4


@pytest.mark.parametrize("code,i,expected", [
    ("fr+rf", 1, d("AugModTensor", 2)),
    ("rr+fff", 1, d("DerivedTensor", 2, 1)),
    ("rr+fff", 2, d("DerivedTensor", 2, 0)),
    ("f", 3, ZERO),
    ("fff", 1, ZERO),
    ("r", 0, ZERO),
    ("frf+rr+rfr", 1, d("Homology", 3)),
    ("rrrrr+frrrrf", 1, d("Homology", 9)),
    ("frrrr+rrrrf", 2, d("Homology", 7)),
    ("rrrrr+ffffff", 2, d("DerivedTensor", 5, 3)),
    ("rrr", 3, d("AugIdealTensorPower", 3)),
    ("r+ffff", 1, d("AugQuotient", 4)),
    ("r & f^3", 1, d("AugPower", 3)),
    ("f^3 & r", 1, d("AugPower", 3)),
    ("fffr+ffrf+frff+rfff", 1, d("AugModTensor", 4)),
    ("rff+frf+ffr+ffff", 1, d("GabTensorPower", 3)),
    ("rfrf", 1, UNKNOWN),
    ("r & rf", 1, UNKNOWN),
])
def test_recognize(code, i, expected):
    assert recognize(code, i) == expected


def test_recognize_ignores_summand_order():
    for code in ("rr+frf", "rrf+frr", "rfr+frr+ffff", "rf+ffr+ffff"):
        words = code.split("+")
        for perm in itertools.permutations(words):
            for sep in ("+", " ", " + "):
                for i in (1, 2, 3):
                    assert recognize(sep.join(perm), i) == recognize(code, i)


def test_functor_value_needs_provenance():
    with pytest.raises(ValueError):
        FunctorValue(TRIVIAL, ())
    with pytest.raises(ValueError):
        FrCode(parse("r"), -1)


def test_spec_examples():
    assert evaluate("rr+frf", cyclic(3)).group == AbGroup.cyclic(3)
    assert evaluate("r+ff", symmetric3()).group == AbGroup.cyclic(2)
    assert evaluate("rfr+frr+ffff", cyclic(2)).group == AbGroup.cyclic(2)
    with pytest.raises(UnknownCode):
        evaluate("rfrf", cyclic(2))


def test_homology_codes_match_gruenberg(groups):
    codes = {3: "rr+frf", 4: "rrf+frr", 5: "rrr+frrf"}
    for P in groups.values():
        ctx = GroupContext(P)
        for n, code in codes.items():
            fv = evaluate(code, P, context=ctx)
            assert fv.group == group_homology(P, n)
            assert fv.agrees


def test_derived_tensor_rows(groups):
    for P in groups.values():
        A = abelianization(P)
        ctx = GroupContext(P)
        assert evaluate("rr+fff", P, 1, ctx).group == ab_tor(A, A)
        assert evaluate("rr+fff", P, 2, ctx).group == ab_tensor(A, A)
        for i in (1, 2, 3):
            assert evaluate("rrr+ffff", P, i, ctx).group == derived_tensor_power(A, 3, 3 - i)


def test_tor_code_chain(groups):
    for P in groups.values():
        A = abelianization(P)
        fv = evaluate("rfr+frr+ffff", P)
        assert fv.group == ab_tor(ab_tensor(A, A), A)
        assert fv.agrees


def test_augmentation_tensor_values():
    # g (x)_ZG g = g^2 + H_2(G); for Klein four H_2 = Z/2
    assert evaluate("fr+rf", klein_four()).group == AbGroup(3, (2,))
    assert evaluate("fr+rf", cyclic(3)).group == AbGroup(2)
    # rr at lim^2 for Z/2: g is Z, so g (x) g = Z
    assert evaluate("rr", cyclic(2), 2).group == AbGroup(1)
    assert evaluate("r+fff", symmetric3()).group == AbGroup.cyclic(4)


def test_verify_table_on_small_groups():
    report = verify_table([cyclic(2), klein_four()], game_degrees=(4, 5, 6))
    assert summarize(report) == {"pass": 2 * (24 * 4 + 2)}
    keys = {"code", "lim_degree", "group", "expected_tag", "value", "provenance", "status"}
    assert all(set(c) == keys for c in report)
    cell = next(c for c in report if c["code"] == "rrf+frr" and c["lim_degree"] == 1
                and c["group"] == "Z/2")
    assert cell["value"] == TRIVIAL.to_json()
