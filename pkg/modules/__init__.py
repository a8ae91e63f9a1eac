"""
homforge - Computational Homological Algebra Modules
Each mathematical area has its own module for maintainability
"""

# Module registry - add new modules here
MODULES = {
    'exactlinalg': 'Exact Linear Algebra - Smith/Hermite forms, integer solves',
    'groups': 'Finite Groups - cyclic products, field units, matrix groups',
    'barhomology': 'Bar Homology - chains, c-symbols, boundaries, homology',
    'kunneth': 'Künneth - H_3 of products, Tor splitting cycles',
    'toruscalc': 'Torus Calculus - wedge classes modulo slot permutations',
    'milnor': 'Milnor K-theory - Steinberg models, δ complex, kernel elements',
    'suite': 'Acceptance Suite - all checks with JSON/CSV reports',
}


def get_active_modules():
    """Return list of active modules"""
    return MODULES
