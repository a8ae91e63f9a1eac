import numpy as np
import pytest

from modules.core import CapExceededError, HomomorphismError, UnsupportedFieldError
from modules.groups import (
    FiniteAbelianGroup, FiniteGroup, cyclic, describe, direct_product, from_matrix_generators,
    get_field, group_from_description, hom, product, torus_with_weyl, units_of_field, weyl_elements
)
from modules.groups.finite_group import diagonal_matrix, permutation_matrix


# ============ FIELDS ============
@pytest.mark.parametrize('q', [2, 3, 4, 5, 7, 8, 9, 16, 25, 27])
def test_field_axioms(q):
    F = get_field(q)
    for a in range(1, q):
        assert F.mul(a, F.inverse(a)) == 1
        assert F.add(a, F.sub(0, a)) == 0
        assert F.exp(F.dlog(a)) == a


def test_primitive_root_of_f5_is_two():
    assert get_field(5).primitive_root == 2


def test_unsupported_field():
    with pytest.raises(UnsupportedFieldError):
        get_field(6)


def test_f4_one_minus_generator_is_its_square():
    F = get_field(4)
    w = F.primitive_root
    assert F.one_minus(w) == F.mul(w, w)


# ============ ABELIAN GROUPS ============
def test_abelian_indexing_roundtrip():
    G = FiniteAbelianGroup((2, 3, 4))
    assert G.order == 24
    for g in range(G.order):
        assert G.index(G.vector(g)) == g


def test_abelian_product_convention():
    A, B = cyclic(4), cyclic(3)
    P = product(A, B)
    assert P.index((1, 2)) == 1 * B.order + 2
    assert P.multiply(P.index((3, 2)), P.index((2, 2))) == P.index((1, 1))


def test_projection_and_inclusion_are_homomorphisms():
    G = FiniteAbelianGroup((4, 6))
    G.projection([1]).verify()
    pair = FiniteAbelianGroup((6,))
    pair.inclusion(G, [1]).verify()


def test_unit_group_dlog():
    U = units_of_field(7)
    assert U.order == 6
    assert sorted(U.field_values()) == list(range(1, 7))
    assert U.exp(U.dlog(5)) == 5


# ============ MATRIX GROUPS ============
def test_gl2_f2_has_order_six():
    G = from_matrix_generators(2, [((1, 1), (0, 1)), ((0, 1), (1, 0))])
    assert G.order == 6
    assert not G.is_abelian()
    G.verify_axioms()


def test_torus_plus_swap_in_gl2_f5_has_order_32(order32):
    assert order32.order == 32
    torus = torus_with_weyl(5, 2, perms=())
    assert torus.order == 16
    assert torus.is_abelian()


def test_weyl_elements_and_conjugation(order32):
    w = weyl_elements(order32, 2)[(1, 0)]
    t = order32.index_of(diagonal_matrix([2, 3]))
    assert order32.label(order32.conjugate(w, t)) == diagonal_matrix([3, 2])


def test_gl3_f3_torus_with_one_transposition():
    G = torus_with_weyl(3, 3, perms=[(1, 0, 2)])
    assert G.order == 16
    assert G.has_label(permutation_matrix((1, 0, 2)))


def test_construction_cap():
    with pytest.raises(CapExceededError):
        torus_with_weyl(5, 2, cap=10)


def test_invalid_cayley_table():
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1], [0, 1]])


# ============ PRODUCTS, SUBGROUPS, HOMOMORPHISMS ============
def test_direct_product_of_nonabelian_groups():
    S3 = from_matrix_generators(2, [((1, 1), (0, 1)), ((0, 1), (1, 0))])
    P = direct_product(S3, cyclic(2))
    assert P.order == 12
    P.verify_axioms()


def test_subgroup_inclusion(order32):
    w = weyl_elements(order32, 2)[(1, 0)]
    H, inclusion = order32.subgroup([w])
    assert H.order == 2
    inclusion.verify()
    assert inclusion.is_injective()


def test_hom_extension_and_failure():
    Z6, Z3 = cyclic(6), cyclic(3)
    f = hom(Z6, Z3, {1: 1})
    assert f(5) == 2
    assert f.is_surjective()
    with pytest.raises(HomomorphismError):
        hom(Z3, Z6, {1: 1})


# ============ DESCRIPTIONS ============
@pytest.mark.parametrize('description', [
    {'kind': 'abelian', 'orders': [2, 4]},
    {'kind': 'units', 'q': 9},
    {'kind': 'matrix', 'q': 3, 'gens': [[[2, 0], [0, 1]], [[0, 1], [1, 0]]]},
])
def test_description_rebuilds_same_table(description):
    G = group_from_description(description)
    H = group_from_description(describe(G))
    assert np.array_equal(G.mul, H.mul)


def test_description_accepts_json_text():
    G = group_from_description('{"kind": "abelian", "orders": [2, 2]}')
    assert G.order == 4


def test_unknown_description_kind():
    with pytest.raises(ValueError):
        group_from_description({'kind': 'sporadic'})
