"""
Bar Homology Module
Normalized bar complex of a finite group: chains, c-symbols, boundary decisions and homology
"""

from modules.barhomology.chains import (
    BarChain, boundary, is_cycle, c_symbol, shuffle_product, product_group, unit_chain,
    pushforward, conjugate, conjugation_hom, restrict, signed_permutations
)
from modules.barhomology.complex import (
    CellIndex, BoundaryDecision, HomologyReport,
    boundary_matrix, factorization, is_boundary, class_order, homology, homology_table
)

__all__ = [
    'BarChain', 'boundary', 'is_cycle', 'c_symbol', 'shuffle_product', 'product_group', 'unit_chain',
    'pushforward', 'conjugate', 'conjugation_hom', 'restrict', 'signed_permutations',
    'CellIndex', 'BoundaryDecision', 'HomologyReport',
    'boundary_matrix', 'factorization', 'is_boundary', 'class_order', 'homology', 'homology_table',
]
