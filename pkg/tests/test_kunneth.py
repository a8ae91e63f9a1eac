import math

import pytest

from modules.barhomology import class_order, is_cycle, pushforward, is_boundary
from modules.exactlinalg import AbelianInvariants
from modules.groups import FiniteAbelianGroup
from modules.kunneth import (
    abelian_homology, chi_chain, cyclic_homology, h3_product_decomposition, theta_chains,
    tor_cyclic, verify_decomposition, verify_theta_splitting
)


# ============ CLOSED FORMS ============
def test_cyclic_homology_closed_form():
    assert cyclic_homology(5, 0) == AbelianInvariants.integers()
    assert cyclic_homology(5, 3) == AbelianInvariants.cyclic(5)
    assert cyclic_homology(5, 4).is_trivial


def test_tor_of_cyclic_groups():
    assert tor_cyclic(4, 6) == AbelianInvariants.cyclic(2)
    assert tor_cyclic(3, 4).is_trivial


def test_abelian_homology_of_klein_group():
    assert abelian_homology((2, 2), 2) == AbelianInvariants((2,))
    assert abelian_homology((2, 2), 3) == AbelianInvariants((2, 2, 2))
    assert abelian_homology((1, 1), 0) == AbelianInvariants.integers()


@pytest.mark.parametrize('a, b, expected', [
    ((2,), (2,), (2, 2, 2)),
    ((2,), (4,), (2, 2, 4)),
    ((3,), (3,), (3, 3, 3)),
    ((2,), (6,), (2, 2, 6)),
])
def test_h3_decomposition_of_two_cyclics(a, b, expected):
    decomposition = h3_product_decomposition(a, b)
    assert decomposition.total == AbelianInvariants.from_orders(expected)
    tor = [s for s in decomposition.summands if s.kind == 'tor']
    assert tor[0].invariants == AbelianInvariants.cyclic(math.gcd(a[0], b[0]))


def test_decomposition_labels_and_dict():
    data = h3_product_decomposition((2, 2), (3,)).to_dict()
    labels = [s['label'] for s in data['summands']]
    assert labels == ['H0(A)⊗H3(B)', 'H1(A)⊗H2(B)', 'H2(A)⊗H1(B)', 'H3(A)⊗H0(B)', 'Tor(A,B)']


@pytest.mark.parametrize('m, n', [(2, 2), (2, 4), (3, 3)])
def test_closed_form_matches_bar_complex(m, n):
    assert verify_decomposition((m,), (n,))['match']


@pytest.mark.slow
def test_closed_form_matches_bar_complex_for_z2_z6():
    assert verify_decomposition((2,), (6,))['match']


# ============ SPLITTING CYCLES ============
def test_chi_is_a_cycle_of_order_two():
    chi = chi_chain(2, 2)
    assert chi.d == 2
    assert is_cycle(chi.chain)
    assert class_order(chi.chain) == 2


def test_chi_projections_vanish():
    chi = chi_chain(2, 4)
    G = chi.chain.group
    for axis in (0, 1):
        assert is_boundary(pushforward(G.projection([axis]), chi.chain)).is_boundary


def test_chi_variants_agree_for_equal_orders():
    assert chi_chain(3, 3, variant='gcd').chain == chi_chain(3, 3, variant='literal').chain


def test_chi_rejects_unknown_variant():
    with pytest.raises(ValueError):
        chi_chain(2, 2, variant='halved')


@pytest.mark.parametrize('m, n', [(2, 2), (2, 4), (3, 3)])
def test_theta_splitting_reports(m, n):
    report = verify_theta_splitting(m, n)
    assert report['passed']
    assert report['order'] == math.gcd(m, n)
    assert set(report['variants']) == {'gcd', 'literal'}
    assert report['variants']['gcd']['passed']


def test_coprime_orders_give_trivial_chi():
    report = verify_theta_splitting(2, 3)
    assert report['gcd'] == 1
    assert report['order'] == 1


def test_theta_chains_for_products():
    entries = theta_chains((2, 2), (2,))
    assert len(entries) == 2
    for entry in entries:
        assert entry['cycle']
        assert entry['order'] == 2
        assert entry['chain'].group.orders == (2, 2, 2)


def test_theta_chains_skip_coprime_pairs():
    assert theta_chains(FiniteAbelianGroup((3,)), FiniteAbelianGroup((4,)), verify=False) == []
