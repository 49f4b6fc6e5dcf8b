import pytest

from frlim.exactalg import AbGroup, TRIVIAL
from frlim.freegrp import (
    FreeWord,
    GroupRingElement,
    Presentation,
    cyclic,
    klein_four,
    schreier_data,
    symmetric3,
    todd_coxeter,
)
from frlim.gruenberg import (
    DegreeTooLarge,
    NotInIdeal,
    build_resolution,
    express_in_r_basis,
    group_homology,
    lattice_group_homology,
    periodic_cyclic_homology,
)

C2 = AbGroup.cyclic(2)


def _x(power):
    return GroupRingElement.of(FreeWord.gen(0, power))


def test_express_in_r_basis():
    P = cyclic(3)
    S = schreier_data(P, todd_coxeter(P))
    one = GroupRingElement.one()
    assert express_in_r_basis(_x(6) - one, S) == {0: _x(3) + one}
    assert express_in_r_basis(_x(4) - _x(1), S) == {0: _x(1)}
    with pytest.raises(NotInIdeal):
        express_in_r_basis(_x(1) - one + one, S)


@pytest.mark.parametrize("P,N", [
    (cyclic(2), 6), (cyclic(3), 6), (cyclic(4), 5), (cyclic(6), 5),
    (klein_four(), 6), (symmetric3(), 7),
])
def test_d_squared_is_zero(P, N):
    res = build_resolution(P, N, check=False)
    res.check_d_squared()
    C = res.tensor_trivial()
    for k in range(1, N):
        assert (C.differential(k) @ C.differential(k + 1)).is_zero()


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_cyclic_homology_matches_periodic_oracle(m):
    res = build_resolution(cyclic(m), 6)
    for n in range(6):
        assert group_homology(cyclic(m), n, resolution=res) == periodic_cyclic_homology(m, n)


def test_klein_four_homology():
    P = klein_four()
    res = build_resolution(P, 7)
    # Kunneth: H_n(Z/2 x Z/2) for n >= 1
    expected = [AbGroup(1), AbGroup(0, (2, 2)), C2, AbGroup(0, (2, 2, 2)),
                AbGroup(0, (2, 2)), AbGroup(0, (2, 2, 2, 2)), AbGroup(0, (2, 2, 2))]
    for n, e in enumerate(expected):
        assert group_homology(P, n, resolution=res) == e


def test_symmetric_group_homology():
    P = symmetric3()
    res = build_resolution(P, 7)
    expected = [AbGroup(1), C2, TRIVIAL, AbGroup.cyclic(6), TRIVIAL, C2, TRIVIAL]
    for n, e in enumerate(expected):
        assert group_homology(P, n, resolution=res) == e
        assert lattice_group_homology(P, n) == e


def test_homology_with_coefficients():
    P = cyclic(2)
    # H_n(Z/2; Z/2) = Z/2 in every degree
    for n in range(5):
        assert group_homology(P, n, C2) == C2


def test_gruenberg_ranks():
    res = build_resolution(klein_four(), 3)
    # C_{2n} has rank rank(R)^n, C_{2n+1} has rank d * rank(R)^n over ZG
    assert [res.rank(k) for k in range(4)] == [1, 2, 5, 10]


def test_basis_cap():
    with pytest.raises(DegreeTooLarge):
        build_resolution(symmetric3(), 6, basis_cap=50)


def test_non_standard_presentation_of_z6():
    P = Presentation.from_strings(["a", "b"], ["a^2", "b^3", "a*b*a^-1*b^-1"])
    res = build_resolution(P, 5)
    for n in range(5):
        assert group_homology(P, n, resolution=res) == periodic_cyclic_homology(6, n)
