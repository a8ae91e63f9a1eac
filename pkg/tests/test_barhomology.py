import pytest

from modules.barhomology import (
    BarChain, boundary, c_symbol, class_order, conjugate, homology, homology_table, is_boundary,
    is_cycle, product_group, pushforward, shuffle_product, signed_permutations
)
from modules.core import CapExceededError, NonCommutingError, PreconditionError
from modules.exactlinalg import AbelianInvariants
from modules.groups import FiniteAbelianGroup, cyclic, from_matrix_generators, units_of_field, weyl_elements
from modules.groups.finite_group import diagonal_matrix


def random_chain(rng, G, degree, cells=6):
    terms = {}
    for _ in range(cells):
        cell = tuple(rng.randrange(G.order) for _ in range(degree))
        terms[cell] = rng.randint(-3, 3)
    return BarChain(G, degree, terms)


# ============ CHAINS ============
def test_cells_containing_identity_vanish(z6):
    chain = BarChain(z6, 2, {(0, 3): 5, (1, 2): 1})
    assert chain.items() == [((1, 2), 1)]


def test_chain_rejects_wrong_cell_length(z6):
    with pytest.raises(ValueError):
        BarChain(z6, 2, {(1,): 1})


@pytest.mark.parametrize('degree', [2, 3, 4])
def test_boundary_squares_to_zero(rng, z6, degree):
    for _ in range(5):
        chain = random_chain(rng, z6, degree)
        assert not boundary(boundary(chain))


def test_boundary_of_two_cell(z6):
    assert boundary(BarChain.cell(z6, (1, 2))) == BarChain(z6, 1, {(2,): 1, (3,): -1, (1,): 1})


def test_boundary_in_degree_zero_is_rejected(z6):
    with pytest.raises(PreconditionError):
        boundary(BarChain(z6, 0, {(): 1}))


def test_chain_json_exchange(klein):
    chain = c_symbol(klein, 1, 2)
    assert BarChain.from_json(chain.to_json()) == chain


# ============ C-SYMBOLS ============
def test_c_symbols_are_cycles(klein, rng):
    G = FiniteAbelianGroup((4, 2))
    for n in (1, 2, 3):
        elements = [rng.randrange(G.order) for _ in range(n)]
        assert is_cycle(c_symbol(G, *elements))
    assert is_cycle(c_symbol(klein, 1, 2, 3))


def test_c_symbol_sign_rule():
    G = FiniteAbelianGroup((4, 4))
    g = [5, 6, 9]
    base = c_symbol(G, *g)
    for perm, sign in signed_permutations(3):
        assert c_symbol(G, *(g[p] for p in perm)) == sign * base


def test_c_symbol_needs_commuting_elements():
    S3 = from_matrix_generators(2, [((1, 1), (0, 1)), ((0, 1), (1, 0))])
    a = S3.index_of(((1, 1), (0, 1)))
    b = S3.index_of(((0, 1), (1, 0)))
    with pytest.raises(NonCommutingError):
        c_symbol(S3, a, b)


def test_c_symbol_length_limit(z6):
    with pytest.raises(PreconditionError):
        c_symbol(z6, 1, 1, 1, 1, 1)


def test_shuffle_of_degree_one_symbols():
    A, B = cyclic(2), cyclic(3)
    P = product_group(A, B)
    lhs = shuffle_product(c_symbol(A, 1), c_symbol(B, 2), target=P)
    assert lhs == c_symbol(P, P.index((1, 0)), P.index((0, 2)))


# ============ BOUNDARY DECISIONS ============
def test_cyclic_two_symbol_is_a_boundary_with_witness(z6):
    chain = c_symbol(z6, 1, 2)
    decision = is_boundary(chain)
    assert decision.is_boundary
    assert boundary(decision.witness) == chain


def test_generator_of_z4_squared_in_degree_two():
    G = FiniteAbelianGroup((4, 4))
    chain = c_symbol(G, G.index((1, 0)), G.index((0, 1)))
    assert not is_boundary(chain).is_boundary
    assert class_order(chain) == 4


def test_degree_one_class_order(z6):
    assert class_order(BarChain.cell(z6, (1,))) == 6
    assert class_order(BarChain.cell(z6, (2,))) == 3


def test_zero_chain_is_a_boundary(z6):
    assert is_boundary(BarChain.zero(z6, 2)).is_boundary


def test_non_cycle_is_rejected(z6):
    with pytest.raises(PreconditionError):
        is_boundary(BarChain.cell(z6, (1, 2)))


def test_pushforward_commutes_with_boundary(rng):
    G = FiniteAbelianGroup((4, 6))
    p = G.projection([1])
    chain = random_chain(rng, G, 3)
    assert pushforward(p, boundary(chain)) == boundary(pushforward(p, chain))


@pytest.mark.slow
def test_conjugation_acts_trivially_on_torus_three_symbols(order32):
    w = weyl_elements(order32, 2)[(1, 0)]
    t = [order32.index_of(diagonal_matrix(d)) for d in ((2, 1), (3, 4), (4, 2))]
    chain = c_symbol(order32, *t)
    decision = is_boundary(chain - conjugate(chain, w), hint=[w])
    assert decision.is_boundary
    assert decision.searched_in <= 16


# ============ HOMOLOGY ============
def test_klein_four_group_homology(klein):
    table = [r.invariants for r in homology_table(klein)]
    assert table == [
        AbelianInvariants.integers(),
        AbelianInvariants((2, 2)),
        AbelianInvariants((2,)),
        AbelianInvariants((2, 2, 2)),
    ]


@pytest.mark.parametrize('n', [2, 3, 4, 5])
def test_cyclic_homology_alternates(n):
    G = cyclic(n)
    assert homology(G, 1).invariants == AbelianInvariants.cyclic(n)
    assert homology(G, 2).invariants.is_trivial
    assert homology(G, 3).invariants == AbelianInvariants.cyclic(n)


def test_units_of_f7_homology():
    assert homology(units_of_field(7), 3).invariants == AbelianInvariants.cyclic(6)


def test_homology_respects_cell_cap(order32):
    with pytest.raises(CapExceededError) as excinfo:
        homology(order32, 3, cap=1000)
    assert excinfo.value.cap == 1000


def test_homology_degree_limit(z6):
    with pytest.raises(PreconditionError):
        homology(z6, 4)


def test_homology_report_dict(z6):
    report = homology(z6, 1).to_dict()
    assert report['describe'] == AbelianInvariants.cyclic(6).describe()
    assert 'elapsed' not in report
