import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nzflow.errors import ParameterError, StructuralError
from nzflow.groups import (TableGroup, conjugate, family_i, family_ii,
                           generated_subgroup, group_from_json_obj, left_cosets)


def test_table_group_cyclic():
    z6 = TableGroup.cyclic(6)
    assert z6.order == 6
    g = z6.element(1)
    assert (g * g).key == (2,)
    assert g.inv().key == (5,)
    assert g.order() == 6


def test_table_group_rejects_broken_tables():
    with pytest.raises(ParameterError):
        TableGroup([[0, 1], [1, 1]])  # not a latin square / no inverse
    # associativity violation: tweak one entry of Z3's table
    with pytest.raises(ParameterError):
        TableGroup([[0, 1, 2], [1, 2, 0], [2, 0, 2]])


def test_from_permutations_a4():
    a4 = TableGroup.from_permutations([(1, 0, 3, 2), (1, 2, 0, 3)])
    assert a4.order == 12
    assert a4.element(1).order() == 2
    assert a4.element(2).order() == 3


def test_dihedral():
    d5 = TableGroup.dihedral(5)
    assert d5.order == 10
    rot = d5.element(2)
    ref = d5.element(1)
    assert rot.order() == 5
    assert ref.order() == 2
    assert conjugate(rot, ref) == rot.inv()


def test_family_i_designated_relations():
    G = family_i(5, 1, 1)
    assert G.order == 60
    assert G.x.order() == 2
    assert G.a.order() == 5
    assert G.y.order() == 3
    # conjugation by y cycles the involutions x1 -> x2 -> x3 -> x1
    x1 = G.make(1, 0, 0)
    x2 = G.make(2, 0, 0)
    x3 = G.make(3, 0, 0)
    assert conjugate(x1, G.y) == x2
    assert conjugate(x2, G.y) == x3
    assert conjugate(x3, G.y) == x1


def test_family_i_conjugation_twists_a():
    G = family_i(7, 1, 2)
    assert conjugate(G.a, G.y) == G.make(0, 2, 0)
    for m in range(7):
        assert conjugate(G.a ** m, G.y) == G.a ** (2 * m)


def test_family_i_parameter_errors():
    with pytest.raises(ParameterError):
        family_i(5, 2, 1)  # k even
    with pytest.raises(ParameterError):
        family_i(4, 1, 1)  # p not prime
    with pytest.raises(ParameterError):
        family_i(3, 1, 1)  # p too small
    with pytest.raises(ParameterError):
        family_i(5, 5, 1)  # p divides k
    with pytest.raises(ParameterError):
        family_i(5, 1, 2)  # 2^3 != 1 mod 5: invalid action


def test_family_i_orders_and_sizes():
    for (p, k, r) in [(5, 1, 1), (7, 1, 2), (7, 3, 4), (13, 1, 3)]:
        G = family_i(p, k, r)
        assert G.order == 12 * p * k
        assert len(G.elements()) == G.order
        assert G.y.order() == 3 * k


def test_family_ii_designated_relations():
    G = family_ii(5, 1)
    assert G.order == 60
    assert G.y.order() == 15
    assert G.y ** 3 == G.a
    G7 = family_ii(7, 6)
    assert G7.y ** 3 == G7.a.inv()
    x1 = G7.make(1, 0, 0)
    assert conjugate(x1, G7.y) == G7.make(2, 0, 0)


def test_family_ii_errors():
    with pytest.raises(ParameterError):
        family_ii(5, 5)  # s = 0 mod p
    with pytest.raises(ParameterError):
        family_ii(9, 1)


def test_mixed_group_operands_rejected():
    G1 = family_i(5, 1, 1)
    G2 = family_ii(5, 1)
    with pytest.raises(StructuralError):
        G1.x * G2.x


def test_group_laws_random_sample(rng):
    for G in (family_i(7, 1, 2), family_ii(5, 2),
              TableGroup.from_permutations([(1, 0, 3, 2), (1, 2, 0, 3)])):
        elems = G.elements()
        e = G.identity
        for _ in range(300):
            g, h, w = (elems[rng.randrange(len(elems))] for _ in range(3))
            assert (g * h) * w == g * (h * w)
            assert g * e == g and e * g == g
            assert g * g.inv() == e
        for _ in range(100):
            g = elems[rng.randrange(len(elems))]
            assert g * e == g


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 59), st.integers(0, 59), st.integers(0, 59))
def test_family_i_associativity_property(i, j, k):
    G = family_i(5, 1, 1)
    elems = G.elements()
    g, h, w = elems[i], elems[j], elems[k]
    assert (g * h) * w == g * (h * w)


def test_xya_form_roundtrip(rng):
    for G in (family_i(7, 1, 2), family_i(5, 3, 1), family_ii(7, 3)):
        for g in G.elements():
            alpha, ypow, apow = G.xya_form(g)
            assert G.make_xya(alpha, ypow, apow) == g


def test_subgroup_and_cosets():
    G = family_i(5, 1, 1)
    H = generated_subgroup(G, [G.a, G.y ** 3])
    assert len(H) == 5  # |G| / 12
    trivial = generated_subgroup(G, [])
    assert trivial == [G.identity]
    G2 = family_ii(5, 1)
    Y = generated_subgroup(G2, [G2.y])
    cosets = left_cosets(G2, Y)
    assert len(cosets) == 4
    reps = sorted(c[0].name for c in cosets)
    assert reps == ["1", "x1", "x2", "x3"]


def test_element_power_and_order():
    G = family_ii(5, 2)
    assert (G.y ** 0) == G.identity
    assert G.y ** -1 == G.y.inv()
    assert (G.a * G.y).order() == 15


def test_group_json_roundtrip():
    for G in (family_i(7, 1, 2), family_ii(5, 3), TableGroup.cyclic(8)):
        obj = G.to_json_obj()
        G2 = group_from_json_obj(obj)
        assert G2.signature == G.signature
        assert G2.to_json_obj() == obj
