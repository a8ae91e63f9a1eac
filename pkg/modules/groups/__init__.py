"""
Finite Groups Module
Cyclic products, unit groups of small fields and matrix-generated subgroups
"""

from modules.groups.abelian import FiniteAbelianGroup, UnitGroup, cyclic, product, trivial, units_of_field
from modules.groups.fields import FieldElement, GaloisField, get_field
from modules.groups.finite_group import (
    FiniteGroup, GroupHom, hom, identity_hom,
    from_matrix_generators, direct_product, torus_with_weyl,
    diagonal_matrix, permutation_matrix, weyl_elements
)
from modules.groups.utils import group_from_description, describe, element_from_json, element_to_json

__all__ = [
    'FiniteAbelianGroup', 'UnitGroup', 'cyclic', 'product', 'trivial', 'units_of_field',
    'FieldElement', 'GaloisField', 'get_field',
    'FiniteGroup', 'GroupHom', 'hom', 'identity_hom',
    'from_matrix_generators', 'direct_product', 'torus_with_weyl',
    'diagonal_matrix', 'permutation_matrix', 'weyl_elements',
    'group_from_description', 'describe', 'element_from_json', 'element_to_json',
]
