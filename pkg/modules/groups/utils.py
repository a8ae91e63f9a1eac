"""
Utility functions for groups
JSON group descriptions and element conversions
"""
import json

from modules.groups.abelian import FiniteAbelianGroup, units_of_field
from modules.groups.finite_group import FiniteGroup, direct_product, from_matrix_generators


def _tupled(value):
    if isinstance(value, list):
        return tuple(_tupled(v) for v in value)
    return value


def group_from_description(description, cap=None):
    """
    Build a group from its JSON description
    Kinds: abelian {"orders"}, matrix {"q", "gens"}, units {"q"},
    product {"factors"}, subgroup {"parent", "generators"}, table {"mul"}
    """
    if isinstance(description, str):
        description = json.loads(description)
    kind = description.get('kind')
    if kind == 'abelian':
        return FiniteAbelianGroup(description['orders'])
    if kind == 'matrix':
        return from_matrix_generators(int(description['q']), description['gens'], cap=cap)
    if kind == 'units':
        return units_of_field(int(description['q']))
    if kind == 'product':
        G, H = (group_from_description(d, cap=cap) for d in description['factors'])
        return direct_product(G, H)
    if kind == 'subgroup':
        parent = group_from_description(description['parent'], cap=cap)
        gens = [parent.index_of(_tupled(label)) for label in description['generators']]
        return parent.subgroup(gens)[0]
    if kind == 'table':
        return FiniteGroup(description['mul'])
    raise ValueError(f'unknown group kind: {kind!r}')


def describe(group):
    return group.description


def element_from_json(group, value):
    """Element index from a JSON label (vector, matrix) or a plain index"""
    if isinstance(value, int):
        if not 0 <= value < group.order:
            raise ValueError(f'element index {value} out of range for {group.name}')
        return value
    return group.index_of(_tupled(value))


def element_to_json(group, g):
    label = group.label(g)
    if isinstance(label, tuple):
        return json.loads(json.dumps(label))
    return label
