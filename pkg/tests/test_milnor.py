import pytest

from modules.core import PreconditionError, UnsupportedFieldError
from modules.milnor import (
    SURROGATE_NOTE, UnitModule, delta0, delta_complex, exactness_report, k2_model, k3_model,
    kernel_element_builder, outer, synthetic_k2_model, synthetic_k3_model, two_divisibility_check,
    verify_complex, verify_phi_pairing
)


@pytest.fixture
def formal_k2():
    return synthetic_k2_model(('a', 'b', 'c'))


# ============ UNIT MODULES ============
def test_field_units_use_discrete_log():
    units = UnitModule.for_field(7)
    assert units.rank == 1
    assert units.q == 7
    assert units.log(1) == {0: 0}
    assert len(units.steinberg_pairs()) == 5


def test_zero_is_not_a_unit():
    with pytest.raises(PreconditionError):
        UnitModule.for_field(5).log(0)


def test_unsupported_field_size():
    with pytest.raises(UnsupportedFieldError):
        k2_model(6)


def test_formal_units_parse_words():
    units = UnitModule.formal(('a', 'b'))
    assert units.log('ab^2') == {0: 1, 1: 2}
    assert units.log('1') == {}
    assert outer(units, 'a', 'b') == {1: 1}


# ============ K-THEORY MODELS ============
@pytest.mark.parametrize('q', [3, 4, 5, 7, 8, 9])
def test_finite_field_models_are_trivial(q):
    assert k2_model(q).is_trivial()
    assert k3_model(q).is_trivial()


def test_model_report_carries_surrogate_note():
    data = k2_model(5).to_dict()
    assert data['note'] == SURROGATE_NOTE
    assert data['trivial']
    assert not data['synthetic']


def test_symbol_arity_is_checked():
    with pytest.raises(ValueError):
        k2_model(5).symbol(2)


def test_synthetic_k2_is_not_trivial(formal_k2):
    model = formal_k2
    assert not model.is_trivial()
    assert model.is_zero(_sum(model.symbol('a', 'b'), model.symbol('b', 'a')))
    assert not model.is_zero(model.symbol('a', 'b'))
    assert model.synthetic


def _sum(*vectors):
    total = {}
    for vector in vectors:
        for idx, v in vector.items():
            total[idx] = total.get(idx, 0) + v
    return total


def test_synthetic_k3_imposes_both_slot_pairs(formal_k2):
    k3 = synthetic_k3_model(formal_k2)
    units = formal_k2.units
    for swapped in (outer(units, 'b', 'a', 'c'), outer(units, 'a', 'c', 'b')):
        assert k3.is_zero(_sum(outer(units, 'a', 'b', 'c'), swapped))


# ============ δ COMPLEX ============
@pytest.mark.parametrize('q', [3, 5, 7])
def test_delta_complex_over_finite_fields(q):
    report = verify_complex(q)
    assert report['passed']
    assert report['unit_triple_failures'] == 0
    assert report['note'] == SURROGATE_NOTE


def test_delta_complex_over_formal_units(formal_k2):
    report = verify_complex(k2=formal_k2)
    assert report['passed']
    assert report['synthetic']
    assert report['unit_triples_checked'] == 27


def test_delta0_is_additive_in_each_slot(formal_k2):
    cx = delta_complex(k2=formal_k2)
    combined = delta0(cx, 'ab', 'c', 'a')
    split = [x + y for x, y in zip(delta0(cx, 'a', 'c', 'a'), delta0(cx, 'b', 'c', 'a'))]
    assert combined == split


def test_exactness_comparison_for_f5():
    report = exactness_report(5)
    assert report['equal']
    assert report['k2_trivial']
    assert 'note' in report


def test_exactness_comparison_for_formal_units(formal_k2):
    report = exactness_report(k2=formal_k2)
    assert report['image_in_kernel']
    assert report['synthetic']


@pytest.mark.parametrize('q', [3, 5, 9])
def test_two_divisibility(q):
    assert two_divisibility_check(q)


def test_two_divisibility_fails_with_two_torsion():
    model = synthetic_k2_model(('a',))
    assert model.invariants().torsion == (2,)
    assert not two_divisibility_check(model=model)


# ============ KERNEL ELEMENTS ============
def test_builder_accepts_f5_triples(order32):
    element = kernel_element_builder([(2, 3, 2), (4, 4, 3)], q=5, compile_into=order32)
    assert element.accepted
    assert element.symbolic_identity
    assert element.compiled is not None
    assert element.to_dict()['compiled_cells'] == len(element.compiled)


def test_builder_with_trivial_unit_gives_zero():
    element = kernel_element_builder([(3, 4, 1)], q=5)
    assert element.accepted
    assert not element.symbolic


def test_builder_rejects_with_residue(formal_k2):
    element = kernel_element_builder([('a', 'b', 'c')], model=formal_k2)
    assert not element.accepted
    assert any(element.residue)
    assert element.symbolic is None


def test_builder_accepts_cancelling_formal_triples(formal_k2):
    element = kernel_element_builder([('a', 'b', 'c'), ('a', 'b', 'c^-1')], model=formal_k2)
    assert element.accepted
    assert element.symbolic_identity
    assert element.assignment is None


def test_builder_needs_a_model_or_field():
    with pytest.raises(ValueError):
        kernel_element_builder([(2, 3, 2)])


def test_builder_checks_triple_length():
    with pytest.raises(ValueError):
        kernel_element_builder([(2, 3)], q=5)


def test_formal_elements_cannot_be_paired(formal_k2):
    element = kernel_element_builder([('a', 'b', 'c'), ('a', 'b', 'c^-1')], model=formal_k2)
    with pytest.raises(PreconditionError):
        verify_phi_pairing(element)


@pytest.mark.slow
def test_phi_pairing_is_a_boundary(order32):
    element = kernel_element_builder([(2, 3, 2)], q=5, compile_into=order32)
    result = verify_phi_pairing(element, ambient=order32)
    assert result['is_boundary']
